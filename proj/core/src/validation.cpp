#include "ctree/validation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "ctree/error.hpp"
#include "ctree/random.hpp"
#include "ctree/union_find.hpp"

namespace ctree {

namespace {

std::string describe(const PiecewiseConstant1D& f) {
  std::ostringstream os;
  os.precision(17);
  os << "piecewise[origin=" << f.origin();
  for (const auto& s : f.segments()) os << ";" << s.width << "x" << s.density;
  os << "]";
  return os.str();
}

std::vector<std::size_t> indices_in(const PointSet& points, Interval iv) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (iv.contains(points[i][0])) out.push_back(i);
  }
  return out;
}

// True when every index is born and all share one label.
bool one_component(const std::vector<std::optional<std::size_t>>& labels,
                   const std::vector<std::size_t>& idx) {
  if (idx.empty()) return true;
  const auto first = labels[idx.front()];
  if (!first) return false;
  return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return labels[i] == first; });
}

bool share_component(const std::vector<std::optional<std::size_t>>& labels,
                     const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::set<std::size_t> seen;
  for (std::size_t i : a) {
    if (labels[i]) seen.insert(*labels[i]);
  }
  return std::any_of(b.begin(), b.end(),
                     [&](std::size_t j) { return labels[j] && seen.count(*labels[j]) > 0; });
}

void tally(ExperimentReport& report, TrialRecord record) {
  ++report.trials;
  if (record.skipped) {
    ++report.skipped;
  } else if (record.success) {
    ++report.successes;
  }
  report.records.push_back(std::move(record));
}

std::map<std::string, double> params_map(const ScaleParams& p) {
  return {{"n", static_cast<double>(p.n)}, {"k", static_cast<double>(p.k)},
          {"d", static_cast<double>(p.d)}, {"alpha", p.alpha},
          {"delta", p.delta},              {"C_delta", p.c_delta},
          {"eps_tilde", p.eps_tilde}};
}

}  // namespace

double ExperimentReport::success_rate() const {
  const std::size_t n = evaluated();
  return n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n);
}

Subpartition brute_force_components(const PointSet& points, std::size_t k, const EdgeRule& rule,
                                    double r, Traversal traversal) {
  const std::size_t n = points.size();
  if (k < 1 || k > n) throw ParameterError("k must satisfy 1 <= k <= n");
  if (std::isnan(r) || r < 0.0) throw ParameterError("level must be a nonnegative radius");

  // r_k by sorting the full distance row.
  std::vector<double> rk(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = distance(points[i], points[j]);
    std::sort(row.begin(), row.end());
    rk[i] = row[k - 1];
  }

  std::vector<bool> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = rk[i] <= r;

  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!active[j]) continue;
      const double dij = distance(points[i], points[j]);
      bool edge = false;
      switch (rule.variant) {
        case Variant::RobustSingleLinkage: edge = dij <= rule.alpha * r; break;
        case Variant::Knn: edge = dij <= rule.alpha * std::max(rk[i], rk[j]); break;
        case Variant::MutualKnn: edge = dij <= rule.alpha * std::min(rk[i], rk[j]); break;
      }
      if (edge) {
        adjacency[i].push_back(j);
        adjacency[j].push_back(i);
      }
    }
  }

  Subpartition out;
  std::vector<bool> seen(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (!active[s] || seen[s]) continue;
    std::vector<std::size_t> block;
    std::deque<std::size_t> frontier{s};
    seen[s] = true;
    while (!frontier.empty()) {
      std::size_t v = 0;
      if (traversal == Traversal::BreadthFirst) {
        v = frontier.front();
        frontier.pop_front();
      } else {
        v = frontier.back();
        frontier.pop_back();
      }
      block.push_back(v);
      for (std::size_t w : adjacency[v]) {
        if (!seen[w]) {
          seen[w] = true;
          frontier.push_back(w);
        }
      }
    }
    std::sort(block.begin(), block.end());
    out.push_back(std::move(block));
  }
  return out;
}

ClusterTree single_linkage_oracle(const PointSet& points) {
  const std::size_t n = points.size();
  if (n < 2) throw ParameterError("single linkage needs at least two points");

  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = distance(points[i], points[j]);
      nearest[i] = std::min(nearest[i], dij);
      nearest[j] = std::min(nearest[j], dij);
      edges.emplace_back(dij, i, j);
    }
  }
  std::sort(edges.begin(), edges.end());

  std::vector<std::tuple<double, std::size_t, std::size_t>> mst;
  UnionFind uf(n);
  for (const auto& [w, i, j] : edges) {
    if (uf.unite(i, j)) mst.emplace_back(w, i, j);
    if (mst.size() + 1 == n) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(nearest[a], a) < std::tie(nearest[b], b);
  });

  TreeBuilder builder(n);
  std::size_t bi = 0;
  std::size_t ei = 0;
  while (bi < n || ei < mst.size()) {
    if (ei == mst.size() || (bi < n && nearest[order[bi]] <= std::get<0>(mst[ei]))) {
      builder.birth(nearest[order[bi]], order[bi]);
      ++bi;
    } else {
      const auto& [w, i, j] = mst[ei++];
      builder.link(w, i, j);
    }
  }
  TreeMeta meta;
  meta.d = points.dimension();
  meta.k = 2;
  meta.alpha = 1.0;
  meta.rule = "single-linkage";
  return builder.finish(std::move(meta));
}

std::vector<ExperimentReport> check_separation_connectedness(const PiecewiseConstant1D& f,
                                                             double lambda, const ScaleParams& p,
                                                             const std::vector<Variant>& variants,
                                                             std::size_t trials,
                                                             std::uint64_t seed) {
  p.validate();
  if (p.d != 1) throw ParameterError("piecewise-constant experiments are one-dimensional");
  const auto cert = separation_certificate(f, lambda);
  if (!cert) throw ParameterError("level set has fewer than two components at this lambda");
  const double r = r_of_lambda(cert->lambda_inf, p);

  std::vector<ExperimentReport> reports;
  for (Variant v : variants) {
    ExperimentReport rep;
    rep.name = "separation_connectedness/" + std::string(to_string(v));
    rep.density = describe(f);
    rep.seed = seed;
    rep.parameters = params_map(p);
    rep.parameters["level"] = lambda;
    rep.parameters["lambda"] = cert->lambda_inf;
    rep.parameters["sigma"] = cert->sigma;
    rep.parameters["eps"] = cert->eps;
    rep.parameters["r_lambda"] = r;
    reports.push_back(std::move(rep));
  }

  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = trial_seed(seed, t);
    const PointSet pts = sample(f, p.n, s);
    const auto a = indices_in(pts, cert->a);
    const auto b = indices_in(pts, cert->a_prime);
    const KnnRadii radii = knn_radii(pts, p.k);
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      TrialRecord rec;
      rec.seed = s;
      rec.values["n_a"] = static_cast<double>(a.size());
      rec.values["n_a_prime"] = static_cast<double>(b.size());
      if (a.empty() || b.empty()) {
        rec.skipped = true;
      } else {
        const ClusterTree tree = build_tree(pts, radii, EdgeRule{variants[vi], p.alpha});
        const auto labels = tree.labels_at(r);
        const bool separated = !share_component(labels, a, b);
        const bool a_conn = one_component(labels, a);
        const bool b_conn = one_component(labels, b);
        rec.values["separated"] = separated;
        rec.values["a_connected"] = a_conn;
        rec.values["a_prime_connected"] = b_conn;
        rec.success = separated && a_conn && b_conn;
      }
      tally(reports[vi], std::move(rec));
    }
  }
  return reports;
}

ExperimentReport knn_disconnection_experiment(double lambda, double Lambda, std::size_t k,
                                              double alpha, std::size_t n, std::size_t trials,
                                              std::uint64_t seed) {
  std::vector<std::string> failed;
  if (!(lambda > 0.0)) failed.push_back("lambda > 0");
  if (!(Lambda > 32.0 * lambda)) failed.push_back("Lambda > 32 lambda");
  if (k < 1) failed.push_back("k >= 1");
  if (!(static_cast<double>(k) <= Lambda / (64.0 * lambda))) failed.push_back("k <= Lambda / (64 lambda)");
  if (!(alpha >= 1.0 && alpha <= 2.0)) failed.push_back("1 <= alpha <= 2");
  if (!(static_cast<double>(n) >= Lambda / lambda)) failed.push_back("n >= Lambda / lambda");
  if (k + 1 > n) failed.push_back("k + 1 <= n");
  if (!failed.empty()) {
    std::string msg = "mutual k-NN disconnection hypotheses violated:";
    for (const auto& f : failed) msg += " [" + f + "]";
    throw ParameterError(msg);
  }

  const auto f = two_bump(lambda, Lambda);
  const double boundary = f.segment_interval(0).hi;
  ExperimentReport rep;
  rep.name = "knn_disconnection";
  rep.density = describe(f);
  rep.seed = seed;
  rep.parameters = {{"lambda", lambda}, {"Lambda", Lambda}, {"k", static_cast<double>(k)},
                    {"alpha", alpha},   {"n", static_cast<double>(n)}};

  const EdgeRule rule{Variant::MutualKnn, alpha};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = trial_seed(seed, t);
    const PointSet pts = sample(f, n, s);
    // k counts neighbours other than the point itself.
    const auto rk = knn_radii(pts, k + 1).radii;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
    // First sorted position outside region A.
    const auto split = static_cast<std::size_t>(
        std::partition_point(order.begin(), order.end(),
                             [&](std::size_t i) { return f.segment_of(pts[i][0]) == 0; }) -
        order.begin());

    std::size_t crossing = 0;
    for (std::size_t ai = split; ai-- > 0;) {
      const std::size_t i = order[ai];
      for (std::size_t bj = split; bj < n; ++bj) {
        const std::size_t j = order[bj];
        const double dij = distance(pts[i], pts[j]);
        if (dij > alpha * rk[i]) break;
        if (edge_present(rule, dij, rk[i], rk[j], std::numeric_limits<double>::infinity())) ++crossing;
      }
    }
    TrialRecord rec;
    rec.seed = s;
    rec.values["n_a"] = static_cast<double>(split);
    rec.values["crossing_edges"] = static_cast<double>(crossing);
    rec.success = crossing == 0;
    tally(rep, std::move(rec));
  }
  rep.parameters["boundary"] = boundary;
  return rep;
}

std::vector<FalseCluster> false_cluster_audit(const ClusterTree& tree, const PiecewiseConstant1D& f,
                                              const PointSet& points, double min_level) {
  const std::size_t n = points.size();
  if (tree.size() != n) throw ParameterError("tree and point set sizes differ");
  if (points.dimension() != 1) throw ParameterError("audit needs one-dimensional points");

  std::vector<double> x(n);
  std::vector<double> fx(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = points[i][0];
    fx[i] = f.density_at(x[i]);  // throws outside the support
  }

  std::vector<double> levels;
  for (const auto& s : f.segments()) {
    if (s.density > 0.0 && s.density >= min_level) levels.push_back(s.density);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<std::vector<Interval>> runs;
  for (double v : levels) runs.push_back(true_level_components(f, v));

  auto run_of = [&](std::size_t li, double pos) -> std::optional<std::size_t> {
    for (std::size_t ri = 0; ri < runs[li].size(); ++ri) {
      if (runs[li][ri].contains(pos)) return ri;
    }
    return std::nullopt;
  };

  struct Aggregate {
    double min_f = 0.0;
    double lo = 0.0;
    double hi = 0.0;
  };
  struct Bucket {
    std::set<std::size_t> members;
    std::size_t low = 0;  // members whose min density equals the bucket level
  };
  std::vector<Aggregate> agg(n);
  std::map<std::pair<std::size_t, std::size_t>, Bucket> buckets;
  std::set<std::pair<std::size_t, std::size_t>> touched;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> last_reported;

  auto visit = [&](std::size_t label, bool insert) {
    const Aggregate& a = agg[label];
    for (std::size_t li = 0; li < levels.size() && levels[li] <= a.min_f; ++li) {
      const auto r_lo = run_of(li, a.lo);
      if (!r_lo || !runs[li][*r_lo].contains(a.hi)) continue;
      const auto key = std::make_pair(li, *r_lo);
      Bucket& b = buckets[key];
      const bool low = a.min_f == levels[li];
      if (insert) {
        b.members.insert(label);
        if (low) ++b.low;
      } else {
        b.members.erase(label);
        if (low) --b.low;
      }
      touched.insert(key);
    }
  };

  std::vector<FalseCluster> out;
  UnionFind uf(n);
  const auto& events = tree.events();
  std::size_t idx = 0;
  while (idx < events.size()) {
    const double r = events[idx].radius;
    for (; idx < events.size() && events[idx].radius == r; ++idx) {
      if (const auto* b = std::get_if<Birth>(&events[idx].what)) {
        agg[b->point] = {fx[b->point], x[b->point], x[b->point]};
        visit(b->point, true);
      } else {
        const auto& m = std::get<Merge>(events[idx].what);
        visit(m.a, false);
        visit(m.b, false);
        agg[m.a] = {std::min(agg[m.a].min_f, agg[m.b].min_f), std::min(agg[m.a].lo, agg[m.b].lo),
                    std::max(agg[m.a].hi, agg[m.b].hi)};
        uf.unite(m.a, m.b);
        visit(m.a, true);
      }
    }
    for (const auto& key : touched) {
      const Bucket& b = buckets[key];
      if (b.low == 0 || b.members.size() < 2) {
        last_reported.erase(key);
        continue;
      }
      std::vector<std::size_t> members(b.members.begin(), b.members.end());
      auto it = last_reported.find(key);
      if (it != last_reported.end() && it->second == members) continue;
      out.push_back({r, levels[key.first], runs[key.first][key.second], members});
      last_reported[key] = std::move(members);
    }
    touched.clear();
  }
  return out;
}

std::size_t hartigan_k(const HartiganSetup& setup, std::size_t n, std::size_t d) {
  const double k = std::ceil(setup.k_factor * static_cast<double>(d) *
                             std::log(static_cast<double>(n)));
  return std::min(n, std::max(setup.k_min, static_cast<std::size_t>(k)));
}

std::vector<ConsistencyPoint> hartigan_consistency_curve(const PiecewiseConstant1D& f,
                                                         const HartiganSetup& setup, double lambda,
                                                         const std::vector<std::size_t>& n_grid,
                                                         std::size_t trials, std::uint64_t seed) {
  const auto comps = true_level_components(f, lambda);
  if (comps.size() < 2)
    throw ParameterError("level set has fewer than two components at this lambda");

  std::vector<ConsistencyPoint> curve;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    ConsistencyPoint point;
    point.n = n;
    point.k = hartigan_k(setup, n, 1);
    auto& rep = point.report;
    rep.name = "hartigan_consistency";
    rep.density = describe(f);
    rep.seed = seed;
    rep.parameters = {{"n", static_cast<double>(n)},
                      {"k", static_cast<double>(point.k)},
                      {"alpha", setup.rule.alpha},
                      {"lambda", lambda},
                      {"k_factor", setup.k_factor}};
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t s = trial_seed(mix_seed(seed) + gi, t);
      const PointSet pts = sample(f, n, s);
      const auto a = indices_in(pts, comps[0]);
      const auto b = indices_in(pts, comps[1]);
      TrialRecord rec;
      rec.seed = s;
      rec.values["n_a"] = static_cast<double>(a.size());
      rec.values["n_a_prime"] = static_cast<double>(b.size());
      if (a.empty() || b.empty()) {
        rec.skipped = true;
      } else {
        const ClusterTree tree = build_tree(pts, point.k, setup.rule);
        rec.success = tree.disjoint_at(a, b);
      }
      tally(rep, std::move(rec));
    }
    curve.push_back(std::move(point));
  }
  return curve;
}

PruningReport pruning_experiment(const PiecewiseConstant1D& f, double level,
                                 const PruningSetup& setup, std::size_t trials,
                                 std::uint64_t seed) {
  const ScaleParams& p = setup.params;
  p.validate();
  if (p.d != 1) throw ParameterError("piecewise-constant experiments are one-dimensional");
  if (!(setup.eps > 0.0 && setup.eps < 0.5)) throw ParameterError("eps must lie in (0, 1/2)");
  const auto cert = separation_certificate(f, level);
  if (!cert) throw ParameterError("level set has fewer than two components at this lambda");

  PruningReport out;
  out.lambda = cert->lambda_inf;
  out.separator_sup = cert->separator_sup;
  const double margin = (1.0 - 2.0 * setup.eps) * out.lambda - p.eps_tilde;
  if (!(out.separator_sup < margin))
    throw ParameterError("separator condition fails: sup over S_sigma = " +
                         std::to_string(out.separator_sup) + " is not below (1-2eps)lambda - eps_tilde = " +
                         std::to_string(margin));
  out.lambda_floor = pruning_lambda_floor(cert->sigma, setup.eps, p);
  const double r = r_of_lambda(out.lambda, p);

  auto init = [&](ExperimentReport& rep, const std::string& name) {
    rep.name = name;
    rep.density = describe(f);
    rep.seed = seed;
    rep.parameters = params_map(p);
    rep.parameters["eps"] = setup.eps;
    rep.parameters["lambda"] = out.lambda;
    rep.parameters["lambda_floor"] = out.lambda_floor;
    rep.parameters["r_lambda"] = r;
  };
  init(out.recovery, "pruning/recovery");
  init(out.pruned_clean, "pruning/pruned_audit_clean");
  init(out.unpruned_clean, "pruning/unpruned_audit_clean");

  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = trial_seed(seed, t);
    const PointSet pts = sample(f, p.n, s);
    const ClusterTree tree = build_tree(pts, p.k, EdgeRule{setup.variant, p.alpha});
    const PrunedTree pt = prune(tree, p);

    TrialRecord rec;
    rec.seed = s;
    const auto a = indices_in(pts, cert->a);
    const auto b = indices_in(pts, cert->a_prime);
    if (a.empty() || b.empty()) {
      rec.skipped = true;
    } else {
      rec.success = !share_component(pt.pruned.labels_at(r), a, b);
    }
    tally(out.recovery, std::move(rec));

    const auto pruned_audit = false_cluster_audit(pt.pruned, f, pts, out.lambda_floor);
    TrialRecord pruned_rec;
    pruned_rec.seed = s;
    pruned_rec.values["false_clusters"] = static_cast<double>(pruned_audit.size());
    pruned_rec.success = pruned_audit.empty();
    tally(out.pruned_clean, std::move(pruned_rec));

    const auto base_audit = false_cluster_audit(tree, f, pts, out.lambda_floor);
    TrialRecord base_rec;
    base_rec.seed = s;
    base_rec.values["false_clusters"] = static_cast<double>(base_audit.size());
    base_rec.success = base_audit.empty();
    tally(out.unpruned_clean, std::move(base_rec));
  }
  return out;
}

}  // namespace ctree
