#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linnet/errors.hpp"
#include "linnet/network.hpp"
#include "linnet/partition.hpp"

namespace linnet {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Exact rationals travel as "p/q" strings.

inline Rat rat_from_json(const Json& j) {
  if (j.is_number_integer())
    return Rat(static_cast<long>(j.get<long long>()));
  if (!j.is_string())
    throw ParseError("rational must be an integer or a \"p/q\" string, got " +
                     j.dump());
  return rat_from_string(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// Rational functions: {"num": [c0, c1, ...], "den": [...]}, coefficients by
// ascending delay power. A missing "den" means 1.

inline RationalFunction ratfun_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num"))
    throw ParseError("matrix entry must be an object with \"num\": " +
                     j.dump());
  auto coeffs = [](const Json& arr, const char* what) {
    if (!arr.is_array())
      throw ParseError(std::string(what) + " must be an array");
    std::vector<Rat> c;
    for (const auto& item : arr) c.push_back(rat_from_json(item));
    return c;
  };
  Polynomial num(coeffs(j.at("num"), "num"));
  Polynomial den = j.contains("den")
                       ? Polynomial(coeffs(j.at("den"), "den"))
                       : Polynomial::one();
  if (den.is_zero()) throw ParseError("entry denominator is zero");
  return RationalFunction(num, den);
}

inline Json ratfun_to_json(const RationalFunction& f) {
  auto poly = [](const Polynomial& p) {
    Json arr = Json::array();
    for (int k = 0; k <= p.degree(); ++k)
      arr.push_back(rat_to_string(p.coeff(k)));
    if (p.is_zero()) arr = Json::array({"0"});
    return arr;
  };
  return Json{{"num", poly(f.num())}, {"den", poly(f.den())}};
}

// ---------------------------------------------------------------------------
// Sparse matrices: {"row,col": entry, ...}, 1-based, omitted entries zero.

inline TransferMatrix sparse_from_json(const Json& j, int rows, int cols,
                                       const std::string& name) {
  TransferMatrix m(rows, cols);
  if (j.is_null()) return m;
  if (!j.is_object())
    throw ParseError(name + " must be an object keyed by \"row,col\"");
  for (const auto& [key, value] : j.items()) {
    int r = 0, c = 0;
    char comma = 0;
    std::istringstream in(key);
    if (!(in >> r >> comma >> c) || comma != ',' || !in.eof())
      throw ParseError(name + " has a malformed key \"" + key + "\"");
    if (r < 1 || r > rows || c < 1 || c > cols)
      throw ParseError(name + " key \"" + key + "\" is outside " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    m.at(r - 1, c - 1) = ratfun_from_json(value);
  }
  return m;
}

inline Json sparse_to_json(const TransferMatrix& m) {
  Json j = Json::object();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (!m.at(r, c).is_zero())
        j[std::to_string(r + 1) + "," + std::to_string(c + 1)] =
            ratfun_to_json(m.at(r, c));
  return j;
}

// ---------------------------------------------------------------------------
// Models. Top level: L, K, G, R, H, Lambda, labels. H and Lambda default to
// identity. Two optional extras cover reduced models faithfully:
// "noise_channels" (filter columns, default L) and "monic" (default true).

inline NetworkModel model_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("model must be a JSON object");
  auto require_int = [&](const char* field) {
    if (!j.contains(field) || !j.at(field).is_number_integer() ||
        j.at(field).get<int>() < 1)
      throw ParseError(std::string("model needs a positive integer \"") +
                       field + "\"");
    return j.at(field).get<int>();
  };
  NetworkModel m;
  m.L = require_int("L");
  m.K = require_int("K");

  m.G = sparse_from_json(j.value("G", Json()), m.L, m.L, "G");
  if (j.contains("R"))
    m.R = sparse_from_json(j.at("R"), m.L, m.K, "R");
  else if (m.K == m.L)
    m.R = TransferMatrix::identity(m.L);
  else
    throw ParseError("R is required when K differs from L");

  int channels = j.value("noise_channels", m.L);
  if (channels < 0) throw ParseError("noise_channels must be nonnegative");
  m.noise.monic_flag = j.value("monic", true);
  m.noise.F = j.contains("H")
                  ? sparse_from_json(j.at("H"), m.L, channels, "H")
                  : TransferMatrix::identity(m.L);
  if (!j.contains("H") && channels != m.L)
    throw ParseError("H is required when noise_channels differs from L");

  if (j.contains("Lambda")) {
    const Json& lam = j.at("Lambda");
    if (!lam.is_array() || static_cast<int>(lam.size()) != channels)
      throw ParseError("Lambda must be a dense " + std::to_string(channels) +
                       "x" + std::to_string(channels) + " array of arrays");
    m.noise.Lambda = TransferMatrix(channels, channels);
    for (int r = 0; r < channels; ++r) {
      const Json& row = lam.at(static_cast<size_t>(r));
      if (!row.is_array() || static_cast<int>(row.size()) != channels)
        throw ParseError("Lambda row " + std::to_string(r + 1) +
                         " has the wrong length");
      for (int c = 0; c < channels; ++c)
        m.noise.Lambda.at(r, c) =
            RationalFunction(rat_from_json(row.at(static_cast<size_t>(c))));
    }
  } else {
    m.noise.Lambda = TransferMatrix::identity(channels);
  }

  if (j.contains("labels")) {
    const Json& labels = j.at("labels");
    if (!labels.is_array() || static_cast<int>(labels.size()) != m.L)
      throw ParseError("labels must list one name per node");
    for (const auto& item : labels) {
      if (!item.is_string()) throw ParseError("labels must be strings");
      m.node_labels.push_back(item.get<std::string>());
    }
  }

  try {
    check_model_dimensions(m);
  } catch (const DimensionMismatch& e) {
    throw ParseError(std::string("inconsistent dimensions: ") + e.what());
  }
  return m;
}

inline Json model_to_json(const NetworkModel& m) {
  Json j;
  j["L"] = m.L;
  j["K"] = m.K;
  j["G"] = sparse_to_json(m.G);
  j["R"] = sparse_to_json(m.R);
  j["H"] = sparse_to_json(m.noise.F);
  int channels = m.noise.channels();
  if (channels != m.L) j["noise_channels"] = channels;
  if (!m.noise.monic_flag) j["monic"] = false;
  Json lam = Json::array();
  for (int r = 0; r < channels; ++r) {
    Json row = Json::array();
    for (int c = 0; c < channels; ++c) {
      const auto& entry = m.noise.Lambda.at(r, c);
      row.push_back(rat_to_string(entry.num().coeff(0) /
                                  entry.den().coeff(0)));
    }
    lam.push_back(row);
  }
  j["Lambda"] = lam;
  if (!m.node_labels.empty()) j["labels"] = m.node_labels;
  return j;
}

inline NetworkModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return model_from_json(j);
}

inline void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Report payloads. Every report carries "schema": 1.

inline Json partition_to_json(const Partition& p) {
  return Json{{"s_tilde", p.s_tilde},
              {"l_set", p.l_set},
              {"v_set", p.v_set},
              {"z_tilde", p.z_tilde}};
}

inline Json validation_report_to_json(const ValidationReport& r) {
  return Json{{"schema", 1},
              {"ok", r.ok()},
              {"hollow", r.hollow},
              {"well_posed", r.well_posed},
              {"response_proper", r.response_proper},
              {"response_stable", r.response_stable},
              {"noise_valid", r.noise_valid},
              {"lambda_positive", r.lambda_positive},
              {"failures", r.failures}};
}

}  // namespace linnet
