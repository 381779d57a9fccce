#include "ctree_cli/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctree/error.hpp"
#include "ctree/estimators.hpp"
#include "ctree/io.hpp"
#include "ctree/pruning.hpp"
#include "ctree/scales.hpp"
#include "ctree/validation.hpp"
#include "ctree_cli/dendrogram.hpp"

namespace ctree::cli {

namespace {

struct Options {
  std::string input;
  std::string tree;
  std::string density;
  std::string out;
  std::size_t k = 0;
  double alpha = 1.0;
  std::string rule = "rsl";
  std::optional<double> delta;
  std::optional<double> c0;
  std::optional<double> eps_tilde;
  std::optional<double> c_delta;
  std::optional<std::uint64_t> seed;
  bool prune_low_levels = false;
  std::optional<double> cut_r;
  std::optional<double> cut_lambda;
  std::size_t n = 0;
  std::size_t max_points = 2000;
  std::string experiment;
  std::size_t trials = 100;
};

constexpr double kDefaultDelta = 0.1;
constexpr double kDefaultC0 = 1.0;

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

// C_delta from the flags, else from the tree's provenance, else the defaults.
double resolve_c_delta(const Options& o, const ClusterTree& tree) {
  if (o.c_delta) return *o.c_delta;
  if (!o.delta && !o.c0 && tree.meta().provenance.c_delta) return *tree.meta().provenance.c_delta;
  return ScaleParams::c_delta_from(o.delta.value_or(kDefaultDelta), o.c0.value_or(kDefaultC0));
}

ScaleParams params_for(const Options& o, const ClusterTree& tree) {
  ScaleParams p;
  p.n = tree.size();
  p.k = tree.meta().k;
  p.d = tree.meta().d;
  p.alpha = tree.meta().alpha;
  p.delta = o.delta.value_or(tree.meta().provenance.delta.value_or(kDefaultDelta));
  p.c_delta = resolve_c_delta(o, tree);
  p.eps_tilde = o.eps_tilde.value_or(0.0);
  p.validate();
  return p;
}

int cmd_tree(const Options& o, std::ostream& out) {
  const PointSet points = read_csv_file(o.input);
  if (o.k < 1 || o.k > points.size())
    throw ParameterError("k must satisfy 1 <= k <= n (n = " + std::to_string(points.size()) + ")");
  const ClusterTree base = build_tree(points, o.k, EdgeRule{parse_variant(o.rule), o.alpha});
  TreeMeta meta = base.meta();
  const double delta = o.delta.value_or(kDefaultDelta);
  meta.provenance.delta = delta;
  meta.provenance.c_delta =
      o.c_delta.value_or(ScaleParams::c_delta_from(delta, o.c0.value_or(kDefaultC0)));
  meta.provenance.seed = o.seed;
  emit(o, out, tree_to_json(ClusterTree(base.size(), base.events(), meta)));
  return kOk;
}

int cmd_cut(const Options& o, std::ostream& out) {
  const ClusterTree tree = read_tree_file(o.tree);
  double r = 0.0;
  if (o.cut_lambda) {
    if (!(*o.cut_lambda > 0.0)) throw ParameterError("--cut-lambda must be positive");
    r = r_of_lambda(*o.cut_lambda, params_for(o, tree));
  } else {
    r = *o.cut_r;
  }
  emit(o, out, labels_to_csv(tree.labels_at(r)));
  return kOk;
}

int cmd_prune(const Options& o, std::ostream& out) {
  const ClusterTree tree = read_tree_file(o.tree);
  const PrunedTree pt = prune(tree, params_for(o, tree), PruneOptions{o.prune_low_levels});
  emit(o, out, pruned_tree_to_json(pt));
  return kOk;
}

int cmd_dendrogram(const Options& o, std::ostream& out) {
  const ClusterTree tree = read_tree_file(o.tree);
  DendrogramStyle style;
  style.max_points = o.max_points;
  emit(o, out, dendrogram_svg(tree, style));
  return kOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const Density f = density_from_json(read_text_file(o.density));
  if (o.n < 1) throw ParameterError("--n must be positive");
  std::ostringstream os;
  write_csv(os, sample(f, o.n, o.seed.value_or(0)));
  emit(o, out, os.str());
  return kOk;
}

PiecewiseConstant1D piecewise_density(const Options& o) {
  if (o.density.empty()) return two_bump(1.0, 4.0);
  const Density f = density_from_json(read_text_file(o.density));
  if (const auto* pc = std::get_if<PiecewiseConstant1D>(&f)) return *pc;
  throw ParameterError("experiments need a one-dimensional piecewise-constant density");
}

int cmd_validate(const Options& o, std::ostream& out) {
  const std::uint64_t seed = o.seed.value_or(1);
  const Variant variant = parse_variant(o.rule);
  if (o.experiment == "disconnection") {
    const std::size_t k = o.k == 0 ? 1 : o.k;
    const std::size_t n = o.n == 0 ? 10000 : o.n;
    emit(o, out, report_to_json(knn_disconnection_experiment(1.0, 64.0, k, o.alpha, n, o.trials, seed)));
    return kOk;
  }

  const PiecewiseConstant1D f = piecewise_density(o);
  const double level = f.max_density();
  if (o.experiment == "hartigan") {
    HartiganSetup setup;
    setup.rule = EdgeRule{variant, o.alpha};
    std::vector<std::size_t> grid{200, 800, 3200};
    if (o.n != 0) grid = {o.n};
    std::vector<ExperimentReport> reports;
    for (auto& point : hartigan_consistency_curve(f, setup, level, grid, o.trials, seed))
      reports.push_back(std::move(point.report));
    emit(o, out, reports_to_json(reports));
    return kOk;
  }

  const auto cert = separation_certificate(f, level);
  if (!cert) throw ParameterError("density has fewer than two components at its top level");
  // Pruning defaults are a setting where recovery is observable at
  // moderate n; the sufficient k from the theory is far larger.
  const bool pruning = o.experiment == "pruning";
  ScaleParams p;
  p.d = 1;
  p.alpha = o.alpha;
  p.delta = o.delta.value_or(kDefaultDelta);
  p.c_delta = o.c_delta.value_or(
      pruning && !o.c0 && !o.delta ? 1.0
                                   : ScaleParams::c_delta_from(p.delta, o.c0.value_or(kDefaultC0)));
  p.eps_tilde = o.eps_tilde.value_or(pruning ? 0.5 : 0.0);
  p.k = o.k != 0 ? o.k : pruning ? 200 : 78;
  const double eps = pruning ? 0.3 : cert->eps;
  p.n = o.n != 0 ? o.n
                 : static_cast<std::size_t>(
                       std::ceil(4.0 * sample_size_bound(cert->sigma, cert->lambda_inf, eps, p)));

  if (o.experiment == "separation") {
    emit(o, out,
         reports_to_json(check_separation_connectedness(
             f, level, p, {Variant::RobustSingleLinkage, Variant::Knn, Variant::MutualKnn},
             o.trials, seed)));
    return kOk;
  }
  if (o.experiment == "pruning") {
    PruningSetup setup{p, variant, eps};
    const PruningReport r = pruning_experiment(f, level, setup, o.trials, seed);
    emit(o, out, reports_to_json({r.recovery, r.pruned_clean, r.unpruned_clean}));
    return kOk;
  }
  throw ParameterError("unknown experiment '" + o.experiment + "'");
}

void add_scale_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--delta", o.delta, "Confidence parameter in (0, 1)");
  cmd->add_option("--c0", o.c0, "Constant C_o in C_delta = 2 C_o log(2/delta)");
  cmd->add_option("--c-delta", o.c_delta, "Set C_delta directly")->excludes("--c0");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cluster tree estimation: robust single linkage and k-NN cluster trees"};
  app.require_subcommand(1);
  const char* env_config = std::getenv("CTREE_CONFIG");
  app.set_config("--config", env_config ? env_config : "", "Config file (TOML/INI) mirroring the flags");

  auto* tree = app.add_subcommand("tree", "Build a cluster tree from a CSV point cloud");
  tree->add_option("--input", o.input, "CSV file, one point per row")->required();
  tree->add_option("--k", o.k, "Neighbourhood size")->required();
  tree->add_option("--alpha", o.alpha, "Edge scale alpha")->capture_default_str();
  tree->add_option("--rule", o.rule, "rsl, knn or mknn")->capture_default_str();
  tree->add_option("--seed", o.seed, "Recorded in provenance");
  add_scale_flags(tree, o);

  auto* cut = app.add_subcommand("cut", "Component labels at one level");
  cut->add_option("--tree", o.tree, "Tree JSON")->required();
  auto* cut_r = cut->add_option("--cut-r", o.cut_r, "Radius level");
  auto* cut_lambda = cut->add_option("--cut-lambda", o.cut_lambda, "Density level, mapped to r(lambda)");
  cut_r->excludes(cut_lambda);
  add_scale_flags(cut, o);

  auto* prune_cmd = app.add_subcommand("prune", "Prune a cluster tree");
  prune_cmd->add_option("--tree", o.tree, "Tree JSON")->required();
  prune_cmd->add_option("--eps-tilde", o.eps_tilde, "Pruning parameter (default 0)");
  prune_cmd->add_flag("--prune-low-levels", o.prune_low_levels,
                      "Also join everything above the low-level cutoff");
  add_scale_flags(prune_cmd, o);

  auto* dendro = app.add_subcommand("dendrogram", "Render a tree as SVG");
  dendro->add_option("--tree", o.tree, "Tree JSON")->required();
  dendro->add_option("--max-points", o.max_points, "Render cap")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Sample a synthetic density to CSV");
  synth->add_option("--density", o.density, "Density JSON")->required();
  synth->add_option("--n", o.n, "Sample size")->required();
  synth->add_option("--seed", o.seed, "Random seed");

  auto* validate = app.add_subcommand("validate", "Run a seeded validation experiment");
  validate->add_option("--experiment", o.experiment, "separation, disconnection, pruning or hartigan")
      ->required()
      ->check(CLI::IsMember({"separation", "disconnection", "pruning", "hartigan"}));
  validate->add_option("--density", o.density, "Piecewise density JSON (default two_bump(1, 4))");
  validate->add_option("--trials", o.trials, "Number of trials")->capture_default_str();
  validate->add_option("--n", o.n, "Sample size override");
  validate->add_option("--k", o.k, "k override");
  validate->add_option("--alpha", o.alpha, "Edge scale alpha")->capture_default_str();
  validate->add_option("--rule", o.rule, "rsl, knn or mknn")->capture_default_str();
  validate->add_option("--eps-tilde", o.eps_tilde, "Pruning parameter (pruning default 0.5)");
  validate->add_option("--seed", o.seed, "Base seed");
  add_scale_flags(validate, o);

  for (auto* sub : {tree, cut, prune_cmd, dendro, synth, validate})
    sub->add_option("--out", o.out, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
    if (cut->parsed() && !o.cut_r && !o.cut_lambda)
      throw CLI::RequiredError("--cut-r or --cut-lambda");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (tree->parsed()) return cmd_tree(o, out);
    if (cut->parsed()) return cmd_cut(o, out);
    if (prune_cmd->parsed()) return cmd_prune(o, out);
    if (dendro->parsed()) return cmd_dendrogram(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    return cmd_validate(o, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace ctree::cli
