#pragma once

// Parameter sweeps along affine paths, reality-domain boundaries and
// exceptional-point refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ptlat/errors.hpp"
#include "ptlat/lattice.hpp"
#include "ptlat/spectra.hpp"

namespace ptlat {

/// p_d = slope * x + offset, x being the driver value.
struct AffineLink {
  double slope = 0.0;
  double offset = 0.0;
};

/// One-dimensional line through coupling space.
class ParameterPath {
 public:
  /// `links[d-1]` gives p_d; the driver coupling is forced to the identity map.
  ParameterPath(std::size_t driver, std::vector<AffineLink> links) : driver_(driver), links_(std::move(links)) {
    if (links_.empty()) throw std::invalid_argument("path needs depth >= 1");
    if (driver_ < 1 || driver_ > links_.size()) throw std::invalid_argument("driver index outside the coupling depth");
    links_[driver_ - 1] = AffineLink{1.0, 0.0};
    for (const auto& l : links_)
      if (!std::isfinite(l.slope) || !std::isfinite(l.offset)) throw NonFinite("path linkage coefficients must be finite");
  }

  /// p_1 = x and every other coupling fixed.
  static ParameterPath single(std::size_t depth, std::size_t driver = 1, std::vector<double> fixed = {}) {
    std::vector<AffineLink> links(depth);
    for (std::size_t d = 0; d < depth && d < fixed.size(); ++d) links[d] = {0.0, fixed[d]};
    return ParameterPath(driver, std::move(links));
  }

  std::size_t depth() const { return links_.size(); }
  std::size_t driver() const { return driver_; }
  const std::vector<AffineLink>& links() const { return links_; }

  CouplingVector<double> at(double x) const {
    std::vector<double> p;
    p.reserve(links_.size());
    for (const auto& l : links_) p.push_back(l.slope * x + l.offset);
    return CouplingVector<double>(std::move(p));
  }

 private:
  std::size_t driver_;
  std::vector<AffineLink> links_;
};

struct SweepRow {
  double driver = 0.0;
  Spectrum spectrum;
  std::size_t real_count = 0;
};

struct SweepTable {
  std::size_t n = 0;
  std::vector<double> grid;
  std::vector<SweepRow> rows;
};

inline Spectrum spectrum_at(std::size_t n, const ParameterPath& path, double x, double tol_real = kDefaultTolReal) {
  try {
    return eigenvalues(build_hamiltonian(n, path.at(x)), tol_real);
  } catch (const NoConvergence& e) {
    throw NoConvergence(e.max_iterations(), "driver value " + std::to_string(x));
  }
}

inline std::size_t real_count_at(std::size_t n, const ParameterPath& path, double x, double tol_real = kDefaultTolReal) {
  return spectrum_at(n, path, x, tol_real).real_count();
}

/// `steps` equally spaced driver values from lo to hi inclusive.
inline SweepTable sweep(std::size_t n, const ParameterPath& path, double lo, double hi, std::size_t steps,
                        double tol_real = kDefaultTolReal) {
  if (!(lo < hi) || steps < 2) throw std::invalid_argument("sweep needs lo < hi and at least 2 steps");
  SweepTable t;
  t.n = n;
  for (std::size_t i = 0; i < steps; ++i) {
    // Endpoints exact; interior points by the same formula for reproducibility.
    const double x = i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    t.grid.push_back(x);
  }
  t.rows.reserve(steps);
  for (double x : t.grid) {
    SweepRow row;
    row.driver = x;
    row.spectrum = spectrum_at(n, path, x, tol_real);
    row.real_count = row.spectrum.real_count();
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline constexpr double kBoundaryTol = 1e-8;

/// Bisection on the integer real count. The bracket ends must have different
/// counts; the returned point is the midpoint of the final bracket.
/// Bisection keeps the end with more real levels as reference, so with several
/// plateaus inside the bracket the edge of the most-real one is returned.
inline double reality_boundary(std::size_t n, const ParameterPath& path, double lo, double hi, double tol = kBoundaryTol,
                               double tol_real = kDefaultTolReal) {
  if (!(lo < hi)) throw std::invalid_argument("bracket needs lo < hi");
  const std::size_t c_lo = real_count_at(n, path, lo, tol_real);
  const std::size_t c_hi = real_count_at(n, path, hi, tol_real);
  if (c_lo == c_hi)
    throw NoSignChange("real count is " + std::to_string(c_lo) + " at both ends of [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  const bool anchor_lo = c_lo > c_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool same = real_count_at(n, path, mid, tol_real) == (anchor_lo ? c_lo : c_hi);
    if (same == anchor_lo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct EPLocation {
  double driver = 0.0;  // lambda*
  std::vector<std::pair<std::size_t, std::size_t>> colliding_pairs;  // indices in the sorted spectrum on the real side
  double gap_at_star = 0.0;  // smallest colliding gap on the real side of the final bracket
  std::size_t real_count_before = 0;  // at the lower end of the final bracket
  std::size_t real_count_after = 0;   // at the upper end
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

inline constexpr std::size_t kEpScanCells = 64;

/// Refines the first change of the real count inside [lo, hi].
///
/// The bracket is scanned on kEpScanCells cells from the lower end; the first
/// cell whose ends differ is bisected. NoSignChange if the count never changes,
/// MultipleTransitions if that cell hides more than one transition.
inline EPLocation ep_refine(std::size_t n, const ParameterPath& path, double lo, double hi, double tol = kBoundaryTol,
                            double tol_real = kDefaultTolReal) {
  if (!(lo < hi)) throw std::invalid_argument("bracket needs lo < hi");
  double a = lo;
  std::size_t ca = real_count_at(n, path, a, tol_real);
  double b = hi;
  std::size_t cb = ca;
  bool found = false;
  for (std::size_t i = 1; i <= kEpScanCells; ++i) {
    const double x = i == kEpScanCells ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kEpScanCells);
    const std::size_t cx = real_count_at(n, path, x, tol_real);
    if (cx != ca) {
      b = x;
      cb = cx;
      found = true;
      break;
    }
    a = x;
  }
  if (!found) throw NoSignChange("real count stays " + std::to_string(ca) + " across [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

  const std::size_t cell_a = ca, cell_b = cb;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (real_count_at(n, path, mid, tol_real) == cell_a)
      a = mid;
    else
      b = mid;
  }
  const std::size_t after = real_count_at(n, path, b, tol_real);
  if (after != cell_b)
    throw MultipleTransitions("more than one real-count transition near " + std::to_string(0.5 * (a + b)));

  EPLocation ep;
  ep.driver = 0.5 * (a + b);
  ep.bracket_lo = a;
  ep.bracket_hi = b;
  ep.real_count_before = cell_a;
  ep.real_count_after = after;

  // Colliding eigenvalues: the closest adjacent real pairs on the side with more real levels.
  const bool real_side_low = cell_a > after;
  const double xr = real_side_low ? a : b;
  const std::size_t changed = real_side_low ? cell_a - after : after - cell_a;
  const Spectrum spec = spectrum_at(n, path, xr, tol_real);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> gaps;
  for (std::size_t i = 0; i + 1 < spec.size(); ++i) {
    if (spec.real_flags[i] && spec.real_flags[i + 1])
      gaps.push_back({spec.eigenvalues[i + 1].real() - spec.eigenvalues[i].real(), {i, i + 1}});
  }
  std::sort(gaps.begin(), gaps.end());
  std::set<std::size_t> taken;
  for (const auto& [gap, pr] : gaps) {
    if (ep.colliding_pairs.size() * 2 >= changed) break;
    if (taken.count(pr.first) || taken.count(pr.second)) continue;
    taken.insert(pr.first);
    taken.insert(pr.second);
    if (ep.colliding_pairs.empty()) ep.gap_at_star = gap;
    ep.colliding_pairs.push_back(pr);
  }
  std::sort(ep.colliding_pairs.begin(), ep.colliding_pairs.end());
  return ep;
}

/// Driver values at which some product 1 - p_d(x)^2 vanishes, ascending.
inline std::vector<double> symmetrizability_boundary(const ParameterPath& path) {
  std::vector<double> out;
  for (const auto& l : path.links()) {
    if (l.slope == 0.0) continue;
    for (double target : {-1.0, 1.0}) out.push_back((target - l.offset) / l.slope);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ptlat
