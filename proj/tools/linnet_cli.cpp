// Command-line front end: validation, reduction, structural screens,
// node selection, equivalence checks and graph export for linear dynamic
// network models stored as JSON files.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "linnet/abstraction.hpp"
#include "linnet/graph.hpp"
#include "linnet/identifiability.hpp"
#include "linnet/json_io.hpp"
#include "linnet/network.hpp"
#include "linnet/select.hpp"
#include "linnet/transform.hpp"

namespace {

using linnet::Json;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

struct CommonOptions {
  int grid = 32;
  double tol = 1e-9;
  long seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--grid", opt.grid, "number of evaluation points")
      ->check(CLI::Range(8, 4096))
      ->capture_default_str();
  cmd->add_option("--tol", opt.tol, "numeric tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "seed for the evaluation grid phase")
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "write the main artifact to this file");
}

linnet::FrequencyGrid make_grid(const CommonOptions& opt) {
  auto g = linnet::FrequencyGrid::standard(opt.grid);
  if (opt.seed != 0) g = g.rotated(0.0137 * static_cast<double>(opt.seed));
  return g;
}

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw linnet::ParseError("cannot parse node list entry \"" + item +
                               "\"");
    }
  }
  return out;
}

struct PartitionSpec {
  std::string s_tilde, l_set, v_set, z_tilde;
  bool z_given = false;
};

void add_partition_flags(CLI::App* cmd, PartitionSpec& spec) {
  cmd->add_option("--stilde", spec.s_tilde,
                  "kept measured nodes (comma-separated, 1-based)");
  cmd->add_option("--lset", spec.l_set, "observation nodes");
  cmd->add_option("--vset", spec.v_set, "nodes reconstructed from observations");
  cmd->add_option("--ztilde", spec.z_tilde,
                  "abstracted nodes (default: the remaining nodes)");
}

linnet::Partition build_partition(const PartitionSpec& spec, int n) {
  linnet::Partition p;
  p.s_tilde = parse_id_list(spec.s_tilde);
  p.l_set = parse_id_list(spec.l_set);
  p.v_set = parse_id_list(spec.v_set);
  p.z_tilde = parse_id_list(spec.z_tilde);
  if (p.z_tilde.empty() && !spec.z_given) {
    std::vector<int> taken = p.s_tilde;
    taken.insert(taken.end(), p.l_set.begin(), p.l_set.end());
    taken.insert(taken.end(), p.v_set.begin(), p.v_set.end());
    std::sort(taken.begin(), taken.end());
    for (int k = 1; k <= n; ++k)
      if (!std::binary_search(taken.begin(), taken.end(), k))
        p.z_tilde.push_back(k);
  }
  linnet::validate_partition(p, n);
  return p;
}

void emit(const Json& report, const std::string& out_path = "") {
  std::cout << report.dump(2) << "\n";
  if (!out_path.empty()) linnet::save_json(report, out_path);
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& model_path, const CommonOptions& opt) {
  auto m = linnet::load_model(model_path);
  auto rep = linnet::validate_model(m);
  Json j = linnet::validation_report_to_json(rep);
  j["command"] = "validate";
  emit(j, opt.out);
  return rep.ok() ? kExitHolds : kExitFails;
}

int cmd_abstract(const std::string& model_path, const PartitionSpec& spec,
                 const std::string& method, const CommonOptions& opt) {
  auto m = linnet::load_model(model_path);
  auto p = build_partition(spec, m.L);

  std::optional<linnet::AbstractionResult> via_transform, via_substitute;
  if (method == "transform" || method == "both")
    via_transform = linnet::abstract_by_transformation(m, p);
  if (method == "substitute" || method == "both")
    via_substitute = linnet::abstract_by_substitution(m, p);
  const auto& res = via_transform ? *via_transform : *via_substitute;

  bool routes_agree = true;
  if (via_transform && via_substitute) {
    routes_agree = via_transform->abstracted.G == via_substitute->abstracted.G &&
                   via_transform->abstracted.R == via_substitute->abstracted.R &&
                   via_transform->abstracted.noise.F ==
                       via_substitute->abstracted.noise.F;
  }

  Json j{{"schema", 1},
         {"command", "abstract"},
         {"method", method},
         {"partition", linnet::partition_to_json(p)},
         {"kept", res.kept},
         {"modules_proper", res.g_proper},
         {"inputs_proper", res.input_proper},
         {"possible_nonproperness", !(res.g_proper && res.input_proper)},
         {"observation_rank_ok", linnet::check_indirect_observations(m, p)},
         {"max_degree", res.max_degree},
         {"model", linnet::model_to_json(res.abstracted)}};
  if (via_transform && via_substitute) j["routes_agree"] = routes_agree;
  std::cout << j.dump(2) << "\n";
  if (!opt.out.empty()) linnet::save_json(linnet::model_to_json(res.abstracted), opt.out);
  if (!routes_agree) {
    std::cerr << "error: the two reduction routes disagree\n";
    return kExitFails;
  }
  return kExitHolds;
}

int cmd_invariance(const std::string& model_path, int i, int j_node,
                   const PartitionSpec& spec, bool verify,
                   const CommonOptions& opt) {
  auto m = linnet::load_model(model_path);
  auto p = build_partition(spec, m.L);
  auto g = linnet::StructuralGraph::from_model(m);
  bool structural = linnet::check_generalized_invariance(g, {i, j_node, p});

  Json j{{"schema", 1},
         {"command", "invariance"},
         {"i", i},
         {"j", j_node},
         {"partition", linnet::partition_to_json(p)},
         {"structural_invariant", structural},
         {"observation_rank_ok", linnet::check_indirect_observations(m, p)}};

  int code = structural ? kExitHolds : kExitFails;
  if (verify && structural) {
    auto res = linnet::abstract_by_transformation(m, p);
    auto kept = linnet::kept_nodes(p);
    auto pos = [&kept](int node) {
      return static_cast<int>(std::find(kept.begin(), kept.end(), node) -
                              kept.begin());
    };
    bool algebraic =
        res.abstracted.G.at(pos(j_node), pos(i)) == m.G.at(j_node - 1, i - 1);
    j["algebraic_invariant"] = algebraic;
    if (!algebraic) code = kExitFails;
  }
  emit(j, opt.out);
  return code;
}

int cmd_select(const std::string& model_path, int i, int j_node,
               const std::string& measurable, int max_results,
               const CommonOptions& opt) {
  auto m = linnet::load_model(model_path);
  auto g = linnet::StructuralGraph::from_model(m);
  std::vector<int> meas = parse_id_list(measurable);
  if (meas.empty())
    for (int k = 1; k <= m.L; ++k) meas.push_back(k);
  linnet::SelectOptions sopt;
  sopt.max_results = max_results;

  Json j{{"schema", 1},
         {"command", "select"},
         {"i", i},
         {"j", j_node},
         {"measurable", meas}};
  try {
    auto results = linnet::select_nodes(g, i, j_node, meas, sopt);
    Json arr = Json::array();
    for (const auto& sel : results) {
      Json item = linnet::partition_to_json(sel.partition);
      item["cost"] = sel.cost;
      arr.push_back(item);
    }
    j["selections"] = arr;
    emit(j, opt.out);
    return kExitHolds;
  } catch (const linnet::NoFeasibleSelection& e) {
    j["selections"] = Json::array();
    j["error"] = e.what();
    emit(j, opt.out);
    return kExitFails;
  }
}

int cmd_equivalence(const std::string& path_a, const std::string& path_b,
                    const std::string& selection, const CommonOptions& opt) {
  auto a = linnet::load_model(path_a);
  auto b = linnet::load_model(path_b);
  auto grid = make_grid(opt);

  Json j{{"schema", 1}, {"command", "equivalence"},
         {"grid", opt.grid}, {"tol", opt.tol}};
  bool holds = false;
  if (selection.empty()) {
    holds = linnet::check_equivalence(a, b, grid, opt.tol);
    j["mode"] = "equal";
  } else {
    linnet::SelectionMatrix c{parse_id_list(selection)};
    holds = linnet::check_abstraction(a, b, c, grid, opt.tol);
    j["mode"] = "abstraction";
    j["selection"] = c.kept;
  }
  j["equivalent"] = holds;
  emit(j, opt.out);
  return holds ? kExitHolds : kExitFails;
}

int cmd_export_dot(const std::string& model_path, const PartitionSpec& spec,
                   bool with_partition, const CommonOptions& opt) {
  auto m = linnet::load_model(model_path);
  auto g = linnet::StructuralGraph::from_model(m);
  std::string dot;
  if (with_partition) {
    auto p = build_partition(spec, m.L);
    dot = linnet::export_dot(g, &p, m.node_labels);
  } else {
    dot = linnet::export_dot(g, nullptr, m.node_labels);
  }
  std::cout << dot;
  if (!opt.out.empty()) {
    std::ofstream out(opt.out);
    if (!out) throw linnet::ParseError("cannot write file " + opt.out);
    out << dot;
  }
  return kExitHolds;
}

int cmd_identifiability(const std::string& model_path,
                        const PartitionSpec& spec, const CommonOptions& opt) {
  auto m = linnet::load_model(model_path);
  auto p = build_partition(spec, m.L);
  auto rep = linnet::check_diagonal_input_conditions(m, p);
  auto predicted = linnet::r_check_structure(m, p);
  auto noise_predicted = linnet::v_check_structure(m, p);
  auto tmpl = linnet::diagonal_input_template(p);
  bool leading = linnet::has_leading_diagonal(predicted);

  Json j{{"schema", 1},
         {"command", "identifiability"},
         {"partition", linnet::partition_to_json(p)},
         {"kept_inputs_private", rep.kept_inputs_private},
         {"observed_inputs_private", rep.observed_inputs_private},
         {"observation_topology", rep.observation_topology},
         {"conditions_ok", rep.ok()},
         {"failures", rep.failures},
         {"input_structure", predicted.render()},
         {"noise_structure", noise_predicted.render()},
         {"template", tmpl.render()},
         {"template_conforms", linnet::conforms_to(predicted, tmpl)},
         {"leading_diagonal", leading}};
  emit(j, opt.out);
  return rep.ok() && leading ? kExitHolds : kExitFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact rational-algebra toolkit for linear dynamic network models"};
  app.require_subcommand(1);

  CommonOptions opt;
  PartitionSpec spec;
  std::string model_path, other_path, method = "transform", selection;
  std::string measurable;
  int i = 0, j_node = 0, max_results = 16;
  bool verify = false;

  auto* validate = app.add_subcommand("validate", "check the model contract");
  validate->add_option("model", model_path)->required();
  add_common(validate, opt);

  auto* abstract_cmd =
      app.add_subcommand("abstract", "reduce the network to the kept nodes");
  abstract_cmd->add_option("model", model_path)->required();
  add_partition_flags(abstract_cmd, spec);
  abstract_cmd
      ->add_option("--method", method,
                   "reduction route: transform, substitute or both")
      ->check(CLI::IsMember({"transform", "substitute", "both"}))
      ->capture_default_str();
  add_common(abstract_cmd, opt);

  auto* invariance =
      app.add_subcommand("invariance", "module invariance screen");
  invariance->add_option("model", model_path)->required();
  invariance->add_option("--i", i, "module input node")->required();
  invariance->add_option("--j", j_node, "module output node")->required();
  invariance->add_flag("--verify", verify,
                       "also compare the reduced module exactly");
  add_partition_flags(invariance, spec);
  add_common(invariance, opt);

  auto* select = app.add_subcommand("select", "enumerate admissible node sets");
  select->add_option("model", model_path)->required();
  select->add_option("--i", i, "module input node")->required();
  select->add_option("--j", j_node, "module output node")->required();
  select->add_option("--measurable", measurable,
                     "measurable nodes (default: all)");
  select->add_option("--max", max_results, "maximum number of selections")
      ->capture_default_str();
  add_common(select, opt);

  auto* equivalence =
      app.add_subcommand("equivalence", "compare two models' external behavior");
  equivalence->add_option("model_a", model_path)->required();
  equivalence->add_option("model_b", other_path)->required();
  equivalence->add_option(
      "--selection", selection,
      "kept nodes of model_b inside model_a (reduction comparison)");
  add_common(equivalence, opt);

  auto* export_dot = app.add_subcommand("export-dot", "render the graph");
  export_dot->add_option("model", model_path)->required();
  add_partition_flags(export_dot, spec);
  add_common(export_dot, opt);

  auto* identifiability = app.add_subcommand(
      "identifiability", "diagonal-input structure screen");
  identifiability->add_option("model", model_path)->required();
  add_partition_flags(identifiability, spec);
  add_common(identifiability, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitHolds : kExitUsage;
  }
  spec.z_given = app.count_all() > 0 &&
                 (abstract_cmd->count("--ztilde") > 0 ||
                  invariance->count("--ztilde") > 0 ||
                  export_dot->count("--ztilde") > 0 ||
                  identifiability->count("--ztilde") > 0);

  try {
    if (validate->parsed()) return cmd_validate(model_path, opt);
    if (abstract_cmd->parsed())
      return cmd_abstract(model_path, spec, method, opt);
    if (invariance->parsed())
      return cmd_invariance(model_path, i, j_node, spec, verify, opt);
    if (select->parsed())
      return cmd_select(model_path, i, j_node, measurable, max_results, opt);
    if (equivalence->parsed())
      return cmd_equivalence(model_path, other_path, selection, opt);
    if (export_dot->parsed())
      return cmd_export_dot(model_path, spec,
                            export_dot->count("--stilde") > 0 ||
                                export_dot->count("--ztilde") > 0,
                            opt);
    if (identifiability->parsed())
      return cmd_identifiability(model_path, spec, opt);
  } catch (const linnet::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const linnet::InvalidPartition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const linnet::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const linnet::Error& e) {
    // Singular blocks, poles on the grid, degree explosions and the like.
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  }
  return kExitUsage;
}
