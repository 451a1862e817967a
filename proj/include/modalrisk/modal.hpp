#pragma once

#include "modalrisk/frame.hpp"

namespace modalrisk {

// Necessity against an evidence standard: (Mp)(w) = inf_v gamma(w,v) => p(v).
// Worlds with zero evidence weight contribute 1, so an empty neighborhood
// yields the vacuous value 1.
inline Proposition box(const Frame& f, std::string_view standard,
                       const Proposition& p, const AlgebraPackage& pkg) {
  const std::size_t n = f.world_count();
  if (p.size() != n) throw FrameError("proposition size does not match frame");
  std::vector<double> out(n, 1.0);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v = 0; v < n; ++v)
      out[w] = std::min(out[w], implies(pkg, f.gamma(standard, w, v), p[v]));
  return Proposition(std::move(out));
}

// Possibility: (<M>p)(w) = sup_v tnorm(gamma(w,v), p(v)). Empty
// neighborhoods yield 0.
inline Proposition diamond(const Frame& f, std::string_view standard,
                           const Proposition& p, const AlgebraPackage& pkg) {
  const std::size_t n = f.world_count();
  if (p.size() != n) throw FrameError("proposition size does not match frame");
  std::vector<double> out(n, 0.0);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v = 0; v < n; ++v)
      out[w] = std::max(out[w], tnorm(pkg, f.gamma(standard, w, v), p[v]));
  return Proposition(std::move(out));
}

// Dual necessity ~[M]p = 1 - [M](1 - p). Coincides with <M>p exactly on
// crisp relations.
inline Proposition dual(const Frame& f, std::string_view standard,
                        const Proposition& p, const AlgebraPackage& pkg) {
  return negate(box(f, standard, negate(p), pkg));
}

// Hesitation: the gap between dual and direct necessity, clamped at 0.
inline Proposition hesitation(const Frame& f, std::string_view standard,
                              const Proposition& p, const AlgebraPackage& pkg) {
  const Proposition b = box(f, standard, p, pkg);
  const Proposition d = dual(f, standard, p, pkg);
  std::vector<double> out(b.size());
  for (std::size_t w = 0; w < b.size(); ++w)
    out[w] = std::max(0.0, d[w] - b[w]);
  return Proposition(std::move(out));
}

// Evidential inconsistency: [M]p AND [M]!p.
inline Proposition inconsistency(const Frame& f, std::string_view standard,
                                 const Proposition& p, const AlgebraPackage& pkg) {
  return meet(box(f, standard, p, pkg), box(f, standard, negate(p), pkg));
}

struct StatusBundle {
  Proposition box;
  Proposition diamond;
  Proposition dual;
  Proposition hesitation;
  Proposition inconsistency;
};

inline StatusBundle statuses(const Frame& f, std::string_view standard,
                             const Proposition& p, const AlgebraPackage& pkg) {
  StatusBundle s;
  s.box = box(f, standard, p, pkg);
  s.diamond = diamond(f, standard, p, pkg);
  s.dual = dual(f, standard, p, pkg);
  std::vector<double> hes(p.size()), inc(p.size());
  const Proposition box_neg = box(f, standard, negate(p), pkg);
  for (std::size_t w = 0; w < p.size(); ++w) {
    hes[w] = std::max(0.0, s.dual[w] - s.box[w]);
    inc[w] = std::min(s.box[w], box_neg[w]);
  }
  s.hesitation = Proposition(std::move(hes));
  s.inconsistency = Proposition(std::move(inc));
  return s;
}

// Pointwise structural uncertainty: zero exactly where p is crisp.
inline Proposition structural_uncertainty(const Proposition& p) {
  std::vector<double> out(p.size());
  for (std::size_t w = 0; w < p.size(); ++w)
    out[w] = structural_uncertainty(p[w]);
  return Proposition(std::move(out));
}

// Global uncertainty of a registered family: pointwise sup of the
// structural uncertainty of each member.
inline Proposition global_uncertainty(const std::vector<Proposition>& family) {
  if (family.empty()) throw ValueError("global uncertainty needs a nonempty family");
  std::vector<double> out(family.front().size(), 0.0);
  for (const auto& p : family) {
    require_same_size(family.front(), p);
    for (std::size_t w = 0; w < p.size(); ++w)
      out[w] = std::max(out[w], structural_uncertainty(p[w]));
  }
  return Proposition(std::move(out));
}

// Empty families carry no uncertainty by convention.
inline double global_uncertainty(const std::vector<Proposition>& family,
                                 std::size_t world) {
  if (family.empty()) return 0.0;
  return global_uncertainty(family)[world];
}

// Global evidential inconsistency of a family under one standard.
inline Proposition global_inconsistency(const Frame& f, std::string_view standard,
                                        const std::vector<Proposition>& family,
                                        const AlgebraPackage& pkg) {
  if (family.empty()) throw ValueError("global inconsistency needs a nonempty family");
  std::vector<double> out(f.world_count(), 0.0);
  for (const auto& p : family) {
    const Proposition inc = inconsistency(f, standard, p, pkg);
    for (std::size_t w = 0; w < inc.size(); ++w)
      out[w] = std::max(out[w], inc[w]);
  }
  return Proposition(std::move(out));
}

enum class RefinementKind { Moore, Anti, Unsup, Conf };

inline std::string_view refinement_name(RefinementKind k) {
  switch (k) {
    case RefinementKind::Moore: return "moore";
    case RefinementKind::Anti: return "anti";
    case RefinementKind::Unsup: return "unsup";
    case RefinementKind::Conf: return "conf";
  }
  return "moore";
}

// p holds but the standard does not certify it: p AND ![M]p.
inline Proposition refine_moore(const Frame& f, std::string_view standard,
                                const Proposition& p, const AlgebraPackage& pkg) {
  return meet(p, negate(box(f, standard, p, pkg)));
}

// p holds while the standard certifies its negation: p AND [M]!p.
inline Proposition refine_anti(const Frame& f, std::string_view standard,
                               const Proposition& p, const AlgebraPackage& pkg) {
  return meet(p, box(f, standard, negate(p), pkg));
}

// Certified by one standard, not certified by another: [E]p AND ![M]p.
inline Proposition refine_unsupported(const Frame& f, std::string_view e_standard,
                                      std::string_view m_standard,
                                      const Proposition& p,
                                      const AlgebraPackage& pkg) {
  if (e_standard == m_standard)
    throw FrameError("cross-standard refinement needs two distinct standards");
  return meet(box(f, e_standard, p, pkg),
              negate(box(f, m_standard, p, pkg)));
}

// Certified by one standard while another certifies the negation:
// [E]p AND [M]!p.
inline Proposition refine_conflict(const Frame& f, std::string_view e_standard,
                                   std::string_view m_standard,
                                   const Proposition& p,
                                   const AlgebraPackage& pkg) {
  if (e_standard == m_standard)
    throw FrameError("cross-standard refinement needs two distinct standards");
  return meet(box(f, e_standard, p, pkg),
              box(f, m_standard, negate(p), pkg));
}

// Dispatcher used by report code. e_standard is only read for the
// cross-standard kinds.
inline Proposition refine(const Frame& f, RefinementKind kind,
                          std::string_view m_standard, const Proposition& p,
                          const AlgebraPackage& pkg,
                          std::string_view e_standard = {}) {
  const bool cross =
      kind == RefinementKind::Unsup || kind == RefinementKind::Conf;
  if (cross && e_standard.empty())
    throw FrameError("cross-standard refinement needs an endorsing standard");
  switch (kind) {
    case RefinementKind::Moore: return refine_moore(f, m_standard, p, pkg);
    case RefinementKind::Anti: return refine_anti(f, m_standard, p, pkg);
    case RefinementKind::Unsup:
      return refine_unsupported(f, e_standard, m_standard, p, pkg);
    case RefinementKind::Conf:
      return refine_conflict(f, e_standard, m_standard, p, pkg);
  }
  throw ValueError("unknown refinement kind");
}

// Expectation-blended necessity: sum_v mu_w(v) * (gamma(w,v) => p(v)).
// Averaging loses the lattice laws; see the aggregation counterexamples in
// the property suite before relying on it.
inline Proposition box_agg(const Frame& f, std::string_view standard,
                           const Proposition& p, const AlgebraPackage& pkg) {
  const std::size_t n = f.world_count();
  if (p.size() != n) throw FrameError("proposition size does not match frame");
  std::vector<double> out(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) {
    const std::vector<double> mu = f.measure_or_uniform(standard, w);
    double acc = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      acc += mu[v] * implies(pkg, f.gamma(standard, w, v), p[v]);
    out[w] = std::min(1.0, std::max(0.0, acc));
  }
  return Proposition(std::move(out));
}

inline Proposition diamond_agg(const Frame& f, std::string_view standard,
                               const Proposition& p, const AlgebraPackage& pkg) {
  const std::size_t n = f.world_count();
  if (p.size() != n) throw FrameError("proposition size does not match frame");
  std::vector<double> out(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) {
    const std::vector<double> mu = f.measure_or_uniform(standard, w);
    double acc = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      acc += mu[v] * tnorm(pkg, f.gamma(standard, w, v), p[v]);
    out[w] = std::min(1.0, std::max(0.0, acc));
  }
  return Proposition(std::move(out));
}

inline void require_measure(const std::vector<double>& mu, std::size_t n) {
  if (mu.size() != n) throw FrameError("measure size does not match proposition");
  double total = 0.0;
  for (double v : mu) {
    if (v < 0.0) throw ValueError("negative measure weight");
    total += v;
  }
  if (std::abs(total - 1.0) > kMeasureTolerance)
    throw ValueError("measure sums to " + std::to_string(total));
}

// Expected truth degree of a fuzzy event.
inline double fuzzy_event_probability(const Proposition& p,
                                      const std::vector<double>& mu) {
  require_measure(mu, p.size());
  double acc = 0.0;
  for (std::size_t w = 0; w < p.size(); ++w) acc += p[w] * mu[w];
  return acc;
}

// Probability of the level set {p >= eta}.
inline double level_probability(const Proposition& p,
                                const std::vector<double>& mu, double eta) {
  if (!in_unit_interval(eta)) throw ValueError("level threshold out of [0,1]");
  require_measure(mu, p.size());
  double acc = 0.0;
  for (std::size_t w = 0; w < p.size(); ++w)
    if (p[w] >= eta) acc += mu[w];
  return acc;
}

// Local probability under the measure attached to w (uniform over the crisp
// neighborhood when none is stored).
inline double local_probability(const Frame& f, std::string_view standard,
                                const Proposition& p, std::size_t world) {
  if (p.size() != f.world_count())
    throw FrameError("proposition size does not match frame");
  const std::vector<double> mu = f.measure_or_uniform(standard, world);
  double acc = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) acc += p[v] * mu[v];
  return acc;
}

}  // namespace modalrisk
