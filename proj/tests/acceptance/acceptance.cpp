// Acceptance gates. Prints one PASS/FAIL line per criterion and exits
// non-zero if any gate fails. Every experiment is seeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../unit/support.hpp"
#include "ctree/estimators.hpp"
#include "ctree/geometry.hpp"
#include "ctree/io.hpp"
#include "ctree/pruning.hpp"
#include "ctree/random.hpp"
#include "ctree/scales.hpp"
#include "ctree/synthetic.hpp"
#include "ctree/validation.hpp"

using namespace ctree;
using ctree::testing::lattice_points;
using ctree::testing::nested;
using ctree::testing::probe_radii;
using ctree::testing::random_points;
using ctree::testing::refines;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const Variant kVariants[] = {Variant::RobustSingleLinkage, Variant::Knn, Variant::MutualKnn};
const double kAlphas[] = {1.0, kSqrt2, 2.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;  // 0 = no runtime limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string rate(const ExperimentReport& r) {
  return fmt("%zu/%zu", r.successes, r.evaluated());
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

PointSet instance_points(Rng& rng, std::size_t n, std::size_t d) {
  const std::uint64_t seed = rng.next_u64();
  // A third of the instances sit on a small lattice so distances and radii tie.
  return rng.uniform() < 1.0 / 3.0 ? lattice_points(n, d, seed, 5) : random_points(n, d, seed);
}

// Radii where the level graph can change, computed from the definitions:
// every r_k value and, for robust single linkage, every d_ij / alpha, each
// with its predecessor. Nearest-neighbour edges do not depend on r.
std::vector<double> independent_candidates(const PointSet& ps, const KnnRadii& rk, const EdgeRule& rule) {
  std::vector<double> c(rk.radii.begin(), rk.radii.end());
  if (rule.variant == Variant::RobustSingleLinkage)
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) c.push_back(distance(ps[i], ps[j]) / rule.alpha);
  const std::size_t m = c.size();
  for (std::size_t i = 0; i < m; ++i) c.push_back(std::nextafter(c[i], 0.0));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

Outcome oracle_equivalence() {
  Rng rng(101);
  std::size_t checks = 0, mismatches = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t d = pick(rng, 1, 3);
    const std::size_t k = pick(rng, 2, 10);
    const std::size_t n = pick(rng, k, 60);
    const double alpha = kAlphas[pick(rng, 0, 2)];
    const PointSet ps = instance_points(rng, n, d);
    const KnnRadii rk = knn_radii(ps, k);
    for (Variant v : kVariants) {
      const EdgeRule rule{v, alpha};
      const auto candidates = independent_candidates(ps, rk, rule);
      const ClusterTree t = build_tree(ps, k, rule);
      auto radii = probe_radii(t);
      radii.insert(radii.end(), candidates.begin(), candidates.end());
      for (double r : radii) {
        ++checks;
        if (t.components_at(r) != brute_force_components(ps, k, rule, r)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("%zu radius checks over 500 instances x 3 rules, %zu mismatches",
                               checks, mismatches)};
}

Outcome single_linkage_identity() {
  Rng rng(202);
  std::size_t mismatches = 0, ties = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = pick(rng, 2, 100);
    // Every fifth set is on a lattice to exercise tied distances.
    const bool lattice = inst % 5 == 4;
    const PointSet ps = lattice ? lattice_points(n, 2, rng.next_u64(), 12) : random_points(n, 2, rng.next_u64());
    ties += lattice;
    const ClusterTree t = build_tree(ps, 2, {Variant::RobustSingleLinkage, 1.0});
    if (t.events() != single_linkage_oracle(ps).events()) ++mismatches;
  }
  return {mismatches == 0,
          fmt("100 sets (%zu with ties), %zu differ event-for-event", ties, mismatches)};
}

Outcome nesting_suite() {
  Rng rng(303);
  std::size_t violations = 0;
  for (int check = 0; check < 1000; ++check) {
    const std::size_t d = pick(rng, 1, 3);
    const std::size_t k = pick(rng, 1, 8);
    const std::size_t n = pick(rng, std::max<std::size_t>(k, 2), 40);
    const double alpha = kAlphas[pick(rng, 0, 2)];
    const Variant v = kVariants[pick(rng, 0, 2)];
    const PointSet ps = instance_points(rng, n, d);
    const KnnRadii rk = knn_radii(ps, k);
    const EdgeRule rule{v, alpha};
    const EdgeRule rsl{Variant::RobustSingleLinkage, alpha};
    const ClusterTree t = build_tree(ps, rk, rule);
    const ClusterTree t_rsl = build_tree(ps, rk, rsl);

    const auto probes = probe_radii(t_rsl);
    double r1 = probes[pick(rng, 0, probes.size() - 1)];
    double r2 = probes[pick(rng, 0, probes.size() - 1)];
    if (r1 > r2) std::swap(r1, r2);

    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (rk.radii[i] <= r1 && !(rk.radii[i] <= r2)) ok = false;  // V_r within V_r'
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dij = distance(ps[i], ps[j]);
        const bool in_vertices = rk.radii[i] <= r1 && rk.radii[j] <= r1;
        const bool e1 = in_vertices && edge_present(rule, dij, rk.radii[i], rk.radii[j], r1);
        const bool e2 = edge_present(rule, dij, rk.radii[i], rk.radii[j], r2);
        if (e1 && !e2) ok = false;  // E_r within E_r'
        // Nearest-neighbour edges are a subset of robust single linkage edges.
        if (e1 && !edge_present(rsl, dij, rk.radii[i], rk.radii[j], r1)) ok = false;
      }
    }
    if (!nested(t.components_at(r1), t.components_at(r2))) ok = false;
    if (!nested(t.components_at(r1), t_rsl.components_at(r1))) ok = false;
    violations += !ok;
  }
  return {violations == 0, fmt("1000 randomized checks, %zu violations", violations)};
}

Outcome scale_identities() {
  Rng rng(404);
  std::size_t inversion = 0, floor_violations = 0;
  double worst = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    ScaleParams p;
    p.d = pick(rng, 1, 6);
    p.n = pick(rng, 2, 1000000);
    p.k = pick(rng, 1, p.n);
    p.alpha = rng.uniform(1.0, 2.0);
    const double Lambda = std::exp(rng.uniform(-5.0, 5.0));
    const double lambda = Lambda * rng.uniform(1e-6, 1.0);
    p.c_delta = 0.0;
    p.eps_tilde = 0.0;
    const double back = lambda_tilde(r_of_lambda(lambda, p), p);
    const double rel = std::abs(back - lambda) / lambda;
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++inversion;

    p.c_delta = rng.uniform(0.0, 10.0);
    if (!(r_of_lambda(lambda, p) >= r_floor(Lambda, p))) ++floor_violations;
  }
  return {inversion == 0 && floor_violations == 0,
          fmt("10000 draws: %zu inversions beyond 1e-12 (worst %.2e), %zu below r_o", inversion,
              worst, floor_violations)};
}

// n and k from the sample size bound and the k guidance, iterated to a fixed
// point because each depends on the other.
ScaleParams separation_params(const SeparationCertificate& cert, double Lambda, double lambda) {
  ScaleParams p;
  p.d = 1;
  p.alpha = kSqrt2;
  p.delta = 0.1;
  p.c_delta = ScaleParams::c_delta_from(p.delta);
  std::size_t n = 100;
  for (int it = 0; it < 20; ++it) {
    p.n = n;
    p.k = 1;
    p.k = static_cast<std::size_t>(
        std::ceil(std::max(k_min_rsl(cert.eps, p, 1.0), k_min_knn(Lambda, lambda, p, 1.0))));
    n = static_cast<std::size_t>(
        std::ceil(4.0 * sample_size_bound(cert.sigma, cert.lambda_inf, cert.eps, p)));
  }
  p.n = n;
  return p;
}

Outcome separation_connectedness() {
  const auto f = two_bump(1.0, 4.0);
  const auto cert = *separation_certificate(f, 4.0);
  const ScaleParams p = separation_params(cert, 4.0, 1.0);
  const double k_knn = k_min_knn(4.0, 1.0, p, 1.0);
  const auto reports = check_separation_connectedness(
      f, 4.0, p, {Variant::RobustSingleLinkage, Variant::Knn, Variant::MutualKnn}, 100, 20240601);
  bool pass = static_cast<double>(p.k) >= k_knn;
  std::string detail = fmt("n=%zu k=%zu (k_min_knn %.1f) r=%.5f;", p.n, p.k, k_knn, r_of_lambda(4.0, p));
  for (const auto& r : reports) {
    pass = pass && r.evaluated() >= 90 && r.success_rate() >= 0.9;
    detail += " " + r.name.substr(r.name.find('/') + 1) + " " + rate(r);
  }
  return {pass, detail + " (gate 0.9 each)"};
}

Outcome disconnection() {
  const auto r = knn_disconnection_experiment(1.0, 64.0, 1, 2.0, 10000, 200, 808);
  return {r.success_rate() >= 0.4,
          fmt("disconnected in %s trials, rate %.3f (gate 0.4)", rate(r).c_str(), r.success_rate())};
}

// Hand-built sample where the left dense group fragments at r = 1 and is
// rejoined by pruning, while the far group stays separate.
Outcome split_cluster_fixture() {
  const double low = 0.001;
  const PiecewiseConstant1D f({{5.5, (1.0 - 93.0 * low) / 11.0}, {93.0, low}, {5.5, (1.0 - 93.0 * low) / 11.0}}, -0.5);
  const PointSet ps(1, {0.0, 1.0, 3.0, 4.0, 100.0, 101.0, 102.0, 103.0});
  const ClusterTree t = build_tree(ps, 2, {Variant::RobustSingleLinkage, 1.0});
  ScaleParams p;
  p.n = 8;
  p.k = 2;
  p.d = 1;
  p.eps_tilde = 0.075;
  const PrunedTree pt = prune(t, p);
  const Subpartition fragmented{{0, 1}, {2, 3}, {4, 5, 6, 7}};
  const Subpartition repaired{{0, 1, 2, 3}, {4, 5, 6, 7}};
  const bool ok = t.components_at(1.0) == fragmented && pt.pruned.components_at(1.0) == repaired &&
                  !false_cluster_audit(t, f, ps).empty() &&
                  false_cluster_audit(pt.pruned, f, ps).empty();
  return {ok, ok ? "fixture repaired" : "fixture not repaired"};
}

Outcome pruning_recovery() {
  const auto f = two_bump(1.0, 4.0);
  const auto cert = *separation_certificate(f, 4.0);
  PruningSetup setup;
  setup.eps = 0.3;
  setup.params.d = 1;
  setup.params.k = 200;
  setup.params.alpha = kSqrt2;
  setup.params.c_delta = 1.0;
  setup.params.eps_tilde = 0.5;
  setup.params.n = setup.params.k;
  setup.params.n = static_cast<std::size_t>(
      std::ceil(4.0 * sample_size_bound(cert.sigma, cert.lambda_inf, setup.eps, setup.params)));

  bool pass = true;
  std::string detail = fmt("n=%zu k=%zu eps~=0.5 C_delta=1;", setup.params.n, setup.params.k);
  for (Variant v : {Variant::RobustSingleLinkage, Variant::MutualKnn}) {
    setup.variant = v;
    const PruningReport r = pruning_experiment(f, 4.0, setup, 100, 707);
    const bool fragmented = r.unpruned_clean.successes < r.unpruned_clean.evaluated();
    pass = pass && fragmented && r.recovery.success_rate() >= 0.9 &&
           r.pruned_clean.success_rate() >= 0.9;
    detail += fmt(" %s recovery %s, pruned clean %s, unpruned clean %s;",
                  std::string(to_string(v)).c_str(), rate(r.recovery).c_str(),
                  rate(r.pruned_clean).c_str(), rate(r.unpruned_clean).c_str());
  }
  const Outcome split = split_cluster_fixture();
  return {pass && split.pass, detail + " " + split.detail};
}

Outcome pruning_structure() {
  Rng rng(505);
  std::size_t violations = 0;
  for (int pair = 0; pair < 500; ++pair) {
    const std::size_t d = pick(rng, 1, 3);
    const std::size_t k = pick(rng, 1, 6);
    const std::size_t n = pick(rng, std::max<std::size_t>(k, 2), 40);
    const EdgeRule rule{kVariants[pick(rng, 0, 2)], kAlphas[pick(rng, 0, 2)]};
    const ClusterTree t = build_tree(instance_points(rng, n, d), k, rule);
    ScaleParams p;
    p.n = n;
    p.k = k;
    p.d = d;
    p.alpha = rule.alpha;
    p.c_delta = rng.uniform(0.0, 2.0);
    // Slack on the scale of the tree's own density levels.
    const auto radii = t.event_radii();
    const double r_mid = radii[radii.size() / 2];
    const double scale = r_mid > 0.0 ? static_cast<double>(k) / (n * unit_ball_volume(static_cast<int>(d)) *
                                                                 std::pow(r_mid, static_cast<double>(d)))
                                     : 1.0;
    p.eps_tilde = scale * std::exp(rng.uniform(-4.0, 1.0));
    const PruneOptions options{rng.uniform() < 0.25};
    const PrunedTree pt = prune(t, p, options);
    ScaleParams more = p;
    more.eps_tilde *= 1.0 + rng.uniform(0.0, 2.0);
    const PrunedTree pt_more = prune(t, more, options);

    auto probes = probe_radii(pt.pruned);
    const auto base_probes = probe_radii(t);
    probes.insert(probes.end(), base_probes.begin(), base_probes.end());
    std::sort(probes.begin(), probes.end());
    bool ok = true;
    Subpartition previous;
    for (double r : probes) {
      const auto pruned = pt.pruned.components_at(r);
      if (!refines(t.components_at(r), pruned)) ok = false;             // coarsening
      if (!refines(pruned, pt_more.pruned.components_at(r))) ok = false;  // monotone in eps~
      if (!nested(previous, pruned)) ok = false;                         // hierarchy
      previous = pruned;
    }
    violations += !ok;
  }
  return {violations == 0, fmt("500 (tree, eps~) pairs, %zu violations", violations)};
}

Outcome hartigan() {
  const auto curve = hartigan_consistency_curve(two_bump(1.0, 4.0), {}, 4.0, {200, 800, 3200}, 100, 909);
  std::string detail;
  for (const auto& point : curve)
    detail += fmt("n=%zu k=%zu %s; ", point.n, point.k, rate(point.report).c_str());
  const auto& last = curve.back().report;
  return {last.success_rate() >= 0.95, detail + fmt("gate 0.95 at n=%zu", curve.back().n)};
}

// Everything a run writes: tree JSON per rule, labels at several levels and
// the pruned tree JSON.
std::string artifacts(std::uint64_t seed) {
  std::string out;
  const PointSet ps = sample(two_bump(1.0, 4.0), 500, seed);
  for (Variant v : kVariants) {
    const ClusterTree t = build_tree(ps, 10, {v, kSqrt2});
    out += tree_to_json(t);
    for (double r : {0.001, 0.01, 0.05}) out += labels_to_csv(t.labels_at(r));
    ScaleParams p;
    p.n = 500;
    p.k = 10;
    p.d = 1;
    p.alpha = kSqrt2;
    p.c_delta = 1.0;
    p.eps_tilde = 0.5;
    out += pruned_tree_to_json(prune(t, p));
  }
  const PointSet blobs = sample(Density{[] {
                                  SeparatedBlobs b;
                                  b.blobs = {{{0.0, 0.0}, 1.0, 0.5 / M_PI}, {{3.0, 0.0}, 1.0, 0.5 / M_PI}};
                                  return b;
                                }()},
                                300, seed);
  out += tree_to_json(build_tree(blobs, 8, {Variant::MutualKnn, 1.0}));
  return out;
}

Outcome determinism() {
  const std::string a = artifacts(1234);
  const std::string b = artifacts(1234);
  const bool differs = artifacts(1235) != a;
  return {a == b && differs,
          fmt("%zu bytes identical across two runs: %s; a different seed changes output: %s",
              a.size(), a == b ? "yes" : "no", differs ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "single-linkage identity", 30, single_linkage_identity},
      {3, "nesting and hierarchy", 0, nesting_suite},
      {4, "scale identities", 0, scale_identities},
      {5, "separation and connectedness", 300, separation_connectedness},
      {6, "mutual k-NN disconnection", 120, disconnection},
      {7, "pruning recovery and removal", 0, pruning_recovery},
      {8, "pruning structure", 0, pruning_structure},
      {9, "Hartigan consistency", 600, hartigan},
      {10, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::string timing = fmt("%.1f s", secs);
    if (c.limit_seconds > 0) timing += fmt(", limit %.0f s", c.limit_seconds);
    std::printf("criterion %2d %s  %s: %s [%s]\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
