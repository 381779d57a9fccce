#include "ctree/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ctree/error.hpp"
#include "ctree/random.hpp"

namespace ctree {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kStrictMargin = 1e-9;

// inf / sup of f over a closed interval, counting 0 outside the support.
double range_inf(const PiecewiseConstant1D& f, Interval iv) {
  double out = std::numeric_limits<double>::infinity();
  if (iv.lo < f.origin() || iv.hi > f.support_end()) out = 0.0;
  const auto& segs = f.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Interval s = f.segment_interval(i);
    const bool last = i + 1 == segs.size();
    const bool touches = iv.lo < s.hi || (last && iv.lo <= s.hi);
    if (touches && iv.hi >= s.lo) out = std::min(out, segs[i].density);
  }
  return out;
}

double range_sup(const PiecewiseConstant1D& f, Interval iv) {
  double out = 0.0;
  const auto& segs = f.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Interval s = f.segment_interval(i);
    const bool last = i + 1 == segs.size();
    const bool touches = iv.lo < s.hi || (last && iv.lo <= s.hi);
    if (touches && iv.hi >= s.lo) out = std::max(out, segs[i].density);
  }
  return out;
}

}  // namespace

PiecewiseConstant1D::PiecewiseConstant1D(std::vector<Segment> segments, double origin)
    : segments_(std::move(segments)), origin_(origin) {
  if (segments_.empty()) throw ParameterError("density needs at least one segment");
  if (!std::isfinite(origin_)) throw ParameterError("origin must be finite");
  bounds_.push_back(origin_);
  double mass = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.width > 0.0) || !std::isfinite(s.width))
      throw ParameterError("segment " + std::to_string(i) + " must have positive width");
    if (!(s.density >= 0.0) || !std::isfinite(s.density))
      throw ParameterError("segment " + std::to_string(i) + " must have nonnegative density");
    mass += s.width * s.density;
    bounds_.push_back(bounds_.back() + s.width);
  }
  if (std::abs(mass - 1.0) > kMassTolerance)
    throw ParameterError("density has total mass " + std::to_string(mass) + ", expected 1");
}

std::size_t PiecewiseConstant1D::segment_of(double x) const {
  if (!in_support(x)) throw ParameterError("point " + std::to_string(x) + " outside the support");
  const auto it = std::upper_bound(bounds_.begin(), bounds_.end(), x);
  const auto idx = static_cast<std::size_t>(it - bounds_.begin());
  return std::min(idx - 1, segments_.size() - 1);
}

double PiecewiseConstant1D::max_density() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max(m, s.density);
  return m;
}

PiecewiseConstant1D two_bump(double lambda, double Lambda) {
  if (!(lambda > 0.0)) throw ParameterError("two_bump needs lambda > 0");
  if (!(Lambda > lambda)) throw ParameterError("two_bump needs Lambda > lambda");
  const double width = 1.0 / (lambda + 2.0 * Lambda);
  return PiecewiseConstant1D({{width, Lambda}, {width, lambda}, {width, Lambda}});
}

std::vector<Interval> true_level_components(const PiecewiseConstant1D& f, double lambda) {
  std::vector<Interval> out;
  bool open = false;
  for (std::size_t i = 0; i < f.segments().size(); ++i) {
    const Interval s = f.segment_interval(i);
    if (f.segments()[i].density >= lambda) {
      if (open) {
        out.back().hi = s.hi;
      } else {
        out.push_back(s);
        open = true;
      }
    } else {
      open = false;
    }
  }
  return out;
}

std::optional<SeparationCertificate> separation_certificate(const PiecewiseConstant1D& f,
                                                            double lambda) {
  const auto comps = true_level_components(f, lambda);
  if (comps.size() < 2) return std::nullopt;

  SeparationCertificate c;
  c.component_a = comps[0];
  c.component_b = comps[1];
  const double gap = c.component_b.lo - c.component_a.hi;
  const double wa = c.component_a.width();
  const double wb = c.component_b.width();
  c.sigma_sup = std::min({gap / 2.0, wa / 2.0, wb / 2.0});
  c.sigma = std::min({gap / 2.0 * (1.0 - kStrictMargin), wa / 4.0, wb / 4.0});
  c.separator = 0.5 * (c.component_a.hi + c.component_b.lo);

  // Shrink slightly more than sigma so A_sigma stays off the component ends.
  const double shrink = c.sigma * (1.0 + kStrictMargin);
  c.a = {c.component_a.lo + shrink, c.component_a.hi - shrink};
  c.a_prime = {c.component_b.lo + shrink, c.component_b.hi - shrink};

  const Interval a_sigma{c.a.lo - c.sigma, c.a.hi + c.sigma};
  const Interval b_sigma{c.a_prime.lo - c.sigma, c.a_prime.hi + c.sigma};
  const Interval s_sigma{c.separator - c.sigma, c.separator + c.sigma};
  c.lambda_inf = std::min(range_inf(f, a_sigma), range_inf(f, b_sigma));
  c.separator_sup = range_sup(f, s_sigma);
  if (!(c.lambda_inf > 0.0)) return std::nullopt;
  c.eps_sup = 1.0 - c.separator_sup / c.lambda_inf;
  c.eps = c.eps_sup * (1.0 - kStrictMargin);
  if (!(c.eps > 0.0)) return std::nullopt;
  return c;
}

void SeparatedBlobs::validate() const {
  if (d < 1) throw ParameterError("blob dimension must be >= 1");
  if (blobs.empty()) throw ParameterError("need at least one blob");
  const double vd = unit_ball_volume(static_cast<int>(d));
  double mass = 0.0;
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const auto& b = blobs[i];
    if (b.center.size() != d)
      throw ParameterError("blob " + std::to_string(i) + " center has wrong dimension");
    if (!(b.radius > 0.0)) throw ParameterError("blob radius must be positive");
    if (!(b.density > 0.0)) throw ParameterError("blob density must be positive");
    mass += b.density * vd * std::pow(b.radius, static_cast<double>(d));
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(b.center, blobs[j].center) <= b.radius + blobs[j].radius)
        throw ParameterError("blobs " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
    }
  }
  if (bridge) {
    if (bridge->lo.size() != d || bridge->hi.size() != d)
      throw ParameterError("bridge box has wrong dimension");
    double vol = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (!(bridge->hi[j] > bridge->lo[j])) throw ParameterError("bridge box must have positive extent");
      vol *= bridge->hi[j] - bridge->lo[j];
    }
    if (!(bridge->density > 0.0)) throw ParameterError("bridge density must be positive");
    mass += bridge->density * vol;
  }
  if (std::abs(mass - 1.0) > kMassTolerance)
    throw ParameterError("blob mixture has total mass " + std::to_string(mass) + ", expected 1");
}

double SeparatedBlobs::density_at(std::span<const double> x) const {
  if (x.size() != d) throw ParameterError("point has wrong dimension");
  double f = 0.0;
  for (const auto& b : blobs) {
    if (distance(x, b.center) <= b.radius) f += b.density;
  }
  if (bridge) {
    bool inside = true;
    for (std::size_t j = 0; j < d; ++j) inside = inside && bridge->lo[j] <= x[j] && x[j] <= bridge->hi[j];
    if (inside) f += bridge->density;
  }
  return f;
}

PointSet sample(const PiecewiseConstant1D& f, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample size must be >= 1");
  const auto& segs = f.segments();
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    total += f.segment_mass(i);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw ParameterError("density has no mass");

  Rng rng(seed);
  std::vector<double> xs(n);
  for (double& x : xs) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto i = static_cast<std::size_t>(it - cumulative.begin());
    const double before = i == 0 ? 0.0 : cumulative[i - 1];
    const Interval s = f.segment_interval(i);
    const double t = std::clamp((u - before) / f.segment_mass(i), 0.0, 1.0);
    x = std::min(s.lo + t * segs[i].width, s.hi);
  }
  return PointSet(1, std::move(xs));
}

PointSet sample(const SeparatedBlobs& f, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample size must be >= 1");
  f.validate();
  const std::size_t d = f.d;
  const double vd = unit_ball_volume(static_cast<int>(d));
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& b : f.blobs) {
    total += b.density * vd * std::pow(b.radius, static_cast<double>(d));
    cumulative.push_back(total);
  }
  if (f.bridge) {
    double vol = 1.0;
    for (std::size_t j = 0; j < d; ++j) vol *= f.bridge->hi[j] - f.bridge->lo[j];
    total += f.bridge->density * vol;
    cumulative.push_back(total);
  }

  Rng rng(seed);
  std::vector<double> coords;
  coords.reserve(n * d);
  std::vector<double> p(d);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto piece = static_cast<std::size_t>(it - cumulative.begin());
    if (piece < f.blobs.size()) {
      const auto& b = f.blobs[piece];
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double t = rng.uniform(-1.0, 1.0);
          p[j] = t;
          norm2 += t * t;
        }
      } while (norm2 > 1.0);
      for (std::size_t j = 0; j < d; ++j) p[j] = b.center[j] + b.radius * p[j];
    } else {
      for (std::size_t j = 0; j < d; ++j) p[j] = rng.uniform(f.bridge->lo[j], f.bridge->hi[j]);
    }
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointSet(d, std::move(coords));
}

PointSet sample(const Density& f, std::size_t n, std::uint64_t seed) {
  return std::visit([&](const auto& density) { return sample(density, n, seed); }, f);
}

}  // namespace ctree
