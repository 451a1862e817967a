#pragma once

#include <array>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "modalrisk/lognormal.hpp"
#include "modalrisk/modal.hpp"

namespace modalrisk {

enum class RegionLabel : std::uint8_t { Robust, Moore, PossibleOnly, Excluded };

inline std::string_view region_label_name(RegionLabel l) {
  switch (l) {
    case RegionLabel::Robust: return "robust";
    case RegionLabel::Moore: return "moore";
    case RegionLabel::PossibleOnly: return "possible_only";
    case RegionLabel::Excluded: return "excluded";
  }
  return "excluded";
}

struct GridAxis {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t steps = 201;

  double coordinate(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(steps - 1);
  }
  double step() const {
    return (hi - lo) / static_cast<double>(steps - 1);
  }
};

// Crisp classification of a 2-d grid against a threshold region, with the
// tolerance-ball evidence relation d(w,v)^2 = metric_x*dx^2 + metric_y*dy^2
// <= radius^2 evaluated by direct neighborhood scans (the dense relation
// matrix is never materialized). radius == 0 degenerates to the identity
// neighborhood. Cell (ix,iy) is stored at ix*y.steps+iy.
struct RegionGrid {
  GridAxis x, y;
  double metric_x = 1.0;
  double metric_y = 1.0;
  double radius = 0.0;
  std::vector<std::uint8_t> p;     // 1 iff the cell is in the threshold set A
  std::vector<std::uint8_t> kp;    // 1 iff the whole neighborhood lies in A
  std::vector<std::uint8_t> dia;   // 1 iff the neighborhood meets A
  std::vector<double> rho;         // neighborhood fraction of A cells

  std::size_t cells() const { return x.steps * y.steps; }
  std::size_t index(std::size_t ix, std::size_t iy) const {
    return ix * y.steps + iy;
  }

  RegionLabel label(std::size_t i) const {
    if (kp[i]) return RegionLabel::Robust;
    if (p[i]) return RegionLabel::Moore;
    if (dia[i]) return RegionLabel::PossibleOnly;
    return RegionLabel::Excluded;
  }

  std::array<std::size_t, 4> label_counts() const {
    std::array<std::size_t, 4> counts{0, 0, 0, 0};
    for (std::size_t i = 0; i < cells(); ++i)
      ++counts[static_cast<std::size_t>(label(i))];
    return counts;
  }

  std::size_t hesitation_band_cells() const {  // diamond p minus Kp
    std::size_t n = 0;
    for (std::size_t i = 0; i < cells(); ++i)
      if (dia[i] && !kp[i]) ++n;
    return n;
  }

  // CSV export, one row per cell, x-major then y. Coordinates and rho to 6
  // decimals; p/Kp/DiaKp as 0/1.
  void write_csv(std::ostream& out) const {
    out << "x,y,p,Kp,DiaKp,label,rho\n";
    out << std::fixed << std::setprecision(6);
    for (std::size_t ix = 0; ix < x.steps; ++ix)
      for (std::size_t iy = 0; iy < y.steps; ++iy) {
        const std::size_t i = index(ix, iy);
        out << x.coordinate(ix) << ',' << y.coordinate(iy) << ','
            << int(p[i]) << ',' << int(kp[i]) << ',' << int(dia[i]) << ','
            << region_label_name(label(i)) << ',' << rho[i] << '\n';
      }
  }

  // Plain (P2) PGM of the labels, y increasing upward:
  // excluded 0, possible_only 85, moore 170, robust 255.
  void write_pgm(std::ostream& out) const {
    out << "P2\n" << x.steps << ' ' << y.steps << "\n255\n";
    for (std::size_t row = y.steps; row-- > 0;) {
      for (std::size_t ix = 0; ix < x.steps; ++ix) {
        static constexpr int grey[] = {255, 170, 85, 0};
        if (ix) out << ' ';
        out << grey[static_cast<int>(label(index(ix, row)))];
      }
      out << '\n';
    }
  }
};

namespace detail {

// Shared neighborhood sweep: fills kp/dia/rho from p. Cell centers are
// neighborhood members iff they satisfy the distance bound; the center
// itself always qualifies.
inline void classify_grid(RegionGrid& g) {
  const std::size_t nx = g.x.steps, ny = g.y.steps;
  const double hx = g.x.step(), hy = g.y.step();
  const double r2 = g.radius * g.radius;
  const std::size_t rx =
      g.radius > 0.0
          ? static_cast<std::size_t>(g.radius / (std::sqrt(g.metric_x) * hx))
          : 0;
  const std::size_t ry =
      g.radius > 0.0
          ? static_cast<std::size_t>(g.radius / (std::sqrt(g.metric_y) * hy))
          : 0;
  g.kp.assign(g.cells(), 0);
  g.dia.assign(g.cells(), 0);
  g.rho.assign(g.cells(), 0.0);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const std::size_t jx_lo = ix >= rx ? ix - rx : 0;
    const std::size_t jx_hi = std::min(nx - 1, ix + rx);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::size_t jy_lo = iy >= ry ? iy - ry : 0;
      const std::size_t jy_hi = std::min(ny - 1, iy + ry);
      bool all = true, any = false;
      std::size_t total = 0, hits = 0;
      for (std::size_t jx = jx_lo; jx <= jx_hi; ++jx) {
        const double dx = (static_cast<double>(jx) - static_cast<double>(ix)) * hx;
        const double dx2 = g.metric_x * dx * dx;
        if (dx2 > r2) continue;
        for (std::size_t jy = jy_lo; jy <= jy_hi; ++jy) {
          const double dy = (static_cast<double>(jy) - static_cast<double>(iy)) * hy;
          if (dx2 + g.metric_y * dy * dy > r2) continue;
          ++total;
          if (g.p[g.index(jx, jy)]) {
            ++hits;
            any = true;
          } else {
            all = false;
          }
        }
      }
      const std::size_t i = g.index(ix, iy);
      g.kp[i] = all ? 1 : 0;  // total >= 1 always: the center qualifies
      g.dia[i] = any ? 1 : 0;
      g.rho[i] = static_cast<double>(hits) / static_cast<double>(total);
    }
  }
}

}  // namespace detail

struct ModelRiskParams {
  double alpha = 0.99;
  double c = 100.0;     // capital threshold on ES
  double beta_mu = 0.10;
  double beta_sigma = 0.045;
  GridAxis mu{"mu", 3.5, 5.0, 201};
  GridAxis sigma{"sigma", 0.1, 1.0, 201};
};

// Breach-region classification over the (mu, sigma) parameter plane:
// p = 1 iff ES_alpha >= c, with the normalized ellipse
// (dmu/beta_mu)^2 + (dsigma/beta_sigma)^2 <= 1 as evidence neighborhood.
inline RegionGrid model_risk_grid(const ModelRiskParams& params) {
  if (!(params.beta_mu > 0.0 && params.beta_sigma > 0.0))
    throw ValueError("model-risk tolerances must be positive");
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw ValueError("confidence level must lie in (0,1)");
  if (params.mu.steps < 2 || params.sigma.steps < 2 ||
      !(params.mu.hi > params.mu.lo) || !(params.sigma.hi > params.sigma.lo))
    throw FrameError("invalid model-risk grid");
  if (!(params.sigma.lo > 0.0))
    throw ValueError("sigma axis must be positive");

  RegionGrid g;
  g.x = params.mu;
  g.y = params.sigma;
  g.metric_x = 1.0 / (params.beta_mu * params.beta_mu);
  g.metric_y = 1.0 / (params.beta_sigma * params.beta_sigma);
  g.radius = 1.0;
  g.p.resize(g.cells());
  const double z = normal_quantile(params.alpha);
  for (std::size_t ix = 0; ix < g.x.steps; ++ix) {
    const double mu = g.x.coordinate(ix);
    for (std::size_t iy = 0; iy < g.y.steps; ++iy) {
      const double sigma = g.y.coordinate(iy);
      const double es = std::exp(mu + sigma * sigma / 2.0) *
                        normal_cdf(sigma - z) / (1.0 - params.alpha);
      g.p[g.index(ix, iy)] = es >= params.c ? 1 : 0;
    }
  }
  detail::classify_grid(g);
  return g;
}

// Flood stress surface; max over [0,1]^2 is bounded by 2.65.
inline double flood_stress(double x, double y) {
  return 0.95 * x * x + 0.75 * y * y + 0.85 * x * y +
         0.10 * std::sin(2.5 * M_PI * x) * std::sin(2.0 * M_PI * y);
}

struct FloodParams {
  double c = 0.8;      // stress threshold defining A = {F >= c}
  double a_x = 1.0;    // metric weights
  double a_y = 1.0;
  double beta = 0.08;  // tolerance radius
  GridAxis x{"x", 0.0, 1.0, 201};
  GridAxis y{"y", 0.0, 1.0, 201};
};

inline RegionGrid flood_grid(const FloodParams& params) {
  if (!(params.a_x > 0.0 && params.a_y > 0.0))
    throw ValueError("flood metric weights must be positive");
  if (!(params.beta >= 0.0)) throw ValueError("flood tolerance must be >= 0");
  if (params.x.steps < 2 || params.y.steps < 2 ||
      !(params.x.hi > params.x.lo) || !(params.y.hi > params.y.lo))
    throw FrameError("invalid flood grid");

  RegionGrid g;
  g.x = params.x;
  g.y = params.y;
  g.metric_x = params.a_x;
  g.metric_y = params.a_y;
  g.radius = params.beta;
  g.p.resize(g.cells());
  for (std::size_t ix = 0; ix < g.x.steps; ++ix)
    for (std::size_t iy = 0; iy < g.y.steps; ++iy)
      g.p[g.index(ix, iy)] =
          flood_stress(g.x.coordinate(ix), g.y.coordinate(iy)) >= params.c ? 1 : 0;
  detail::classify_grid(g);
  return g;
}

enum class Quadrant : std::uint8_t {
  RobustLikely,
  RobustUnlikely,
  LikelyFragile,
  UnlikelyUnsupported
};

inline std::string_view quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::RobustLikely: return "robust_likely";
    case Quadrant::RobustUnlikely: return "robust_unlikely";
    case Quadrant::LikelyFragile: return "likely_fragile";
    case Quadrant::UnlikelyUnsupported: return "unlikely_unsupported";
  }
  return "unlikely_unsupported";
}

enum class QuadrantAction : std::uint8_t {
  Endorse,
  SeverityReview,
  EscalateInspect,
  Monitor,
  CloseWithJustification
};

inline std::string_view quadrant_action_name(QuadrantAction a) {
  switch (a) {
    case QuadrantAction::Endorse: return "endorse";
    case QuadrantAction::SeverityReview: return "severity_review";
    case QuadrantAction::EscalateInspect: return "escalate_inspect";
    case QuadrantAction::Monitor: return "monitor";
    case QuadrantAction::CloseWithJustification:
      return "close_with_audit_justification";
  }
  return "monitor";
}

struct QuadrantLabel {
  bool modal = false;       // Kp at the cell
  double local_prob = 0.0;  // rho under the uniform neighborhood measure
  Quadrant quadrant = Quadrant::UnlikelyUnsupported;
  QuadrantAction action = QuadrantAction::Monitor;
};

// Cross-classification of modal status and local probability, recomputed at
// the given tolerance radius with the grid's stored metric weights. The
// action follows the quadrant rule: endorse / escalate+inspect / monitor
// while live / close with audit justification when excluded.
// robust_unlikely cannot occur under these uniform full-support neighborhood
// measures (Kp=1 forces rho=1); the branch exists so the map is total, and
// its severity-review action marks it as needing case-by-case judgement.
inline std::vector<QuadrantLabel> flood_quadrants(const RegionGrid& grid,
                                                  double beta, double rho_high,
                                                  double rho_low) {
  if (!in_unit_interval(rho_high) || !in_unit_interval(rho_low))
    throw ValueError("rho thresholds out of [0,1]");
  if (!(rho_low < rho_high))
    throw ValueError("rho thresholds out of order");
  if (!(beta > 0.0)) throw ValueError("flood tolerance must be positive");

  RegionGrid scratch = grid;
  scratch.radius = beta;
  detail::classify_grid(scratch);

  std::vector<QuadrantLabel> out(grid.cells());
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    QuadrantLabel q;
    q.modal = scratch.kp[i] != 0;
    q.local_prob = scratch.rho[i];
    const bool likely = q.local_prob >= rho_high;
    if (q.modal)
      q.quadrant = likely ? Quadrant::RobustLikely : Quadrant::RobustUnlikely;
    else
      q.quadrant = likely ? Quadrant::LikelyFragile
                          : Quadrant::UnlikelyUnsupported;
    switch (q.quadrant) {
      case Quadrant::RobustLikely: q.action = QuadrantAction::Endorse; break;
      case Quadrant::RobustUnlikely:
        q.action = QuadrantAction::SeverityReview;
        break;
      case Quadrant::LikelyFragile:
        q.action = QuadrantAction::EscalateInspect;
        break;
      case Quadrant::UnlikelyUnsupported:
        q.action = scratch.dia[i] ? QuadrantAction::Monitor
                                  : QuadrantAction::CloseWithJustification;
        break;
    }
    out[i] = q;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-world catalog and shipped scenario frames.

struct TwoWorldRow {
  std::string setting;   // evidence set or (p0,p1) case
  double p0 = 0.0;
  double p1 = 0.0;
  double box = 0.0;
  double diamond = 0.0;
  double third = 0.0;    // dual or moore, per table
  std::string reading;
};

struct TwoWorldCatalog {
  // (Mp, <M>p, dual) at w0 for the four crisp evidence sets, p = (p0,p1).
  std::vector<TwoWorldRow> evidence_sets;
  // (Kp, <K>p, moore) at w0 for the four crisp (p0,p1) under universal K.
  std::vector<TwoWorldRow> universal_cases;
  // ES breach and cascade rows.
  TwoWorldRow es_breach;
  TwoWorldRow cascade;
  // S5 / KD45 frame survey: name, factive everywhere?
  struct FrameRow {
    std::string name;
    bool factive = false;
    FrameProfile profile;
  };
  std::vector<FrameRow> frames;
  // Fuzzy case at user-supplied (a,b,c,d,x,y): full status bundle at w0.
  double fuzzy_box = 0.0, fuzzy_diamond = 0.0, fuzzy_dual = 0.0,
         fuzzy_hesitation = 0.0;
};

namespace detail {

inline Frame two_world_frame(double a, double b, double c, double d,
                             double x, double y) {
  Frame f(std::vector<std::string>{"w0", "w1"});
  f.add_relation("M", {a, b, c, d});
  f.add_proposition("p", Proposition({x, y}));
  return f;
}

}  // namespace detail

// Every crisp two-world table, evaluated through the modal operators (the
// table entries are outputs, not constants). The fuzzy row is evaluated at
// the supplied relation degrees (a,b;c,d) and proposition degrees (x,y).
inline TwoWorldCatalog two_world_catalog(const AlgebraPackage& pkg,
                                         double a = 1.0, double b = 0.6,
                                         double c = 0.0, double d = 1.0,
                                         double x = 0.0, double y = 0.9) {
  TwoWorldCatalog cat;

  struct EvidenceCase {
    const char* name;
    double g0, g1;
    const char* reading;
  };
  const EvidenceCase evidence_cases[] = {
      {"empty", 0, 0, "vacuous support; usually excluded by seriality"},
      {"{w0}", 1, 0, "only the actual state matters"},
      {"{w1}", 0, 1, "only the alternative state matters"},
      {"{w0,w1}", 1, 1, "both states matter"},
  };
  for (const auto& ec : evidence_cases) {
    for (int bits = 0; bits < 4; ++bits) {
      const double p0 = bits & 1 ? 1.0 : 0.0;
      const double p1 = bits & 2 ? 1.0 : 0.0;
      const Frame f = detail::two_world_frame(ec.g0, ec.g1, 0, 1, p0, p1);
      const StatusBundle s = statuses(f, "M", f.proposition("p"), pkg);
      cat.evidence_sets.push_back(
          {ec.name, p0, p1, s.box[0], s.diamond[0], s.dual[0], ec.reading});
    }
  }

  struct UniversalCase {
    double p0, p1;
    const char* reading;
  };
  const UniversalCase universal_cases[] = {
      {0, 0, "p is excluded"},
      {1, 0, "actual risk, but not assurance-endorsed"},
      {0, 1, "not actual, but live nearby"},
      {1, 1, "robust assurance-grade endorsement"},
  };
  for (const auto& uc : universal_cases) {
    const Frame f = detail::two_world_frame(1, 1, 1, 1, uc.p0, uc.p1);
    const Proposition& p = f.proposition("p");
    const Proposition k = box(f, "M", p, pkg);
    const Proposition dia = diamond(f, "M", p, pkg);
    const Proposition moore = refine_moore(f, "M", p, pkg);
    std::ostringstream name;
    name << '(' << uc.p0 << ',' << uc.p1 << ')';
    cat.universal_cases.push_back(
        {name.str(), uc.p0, uc.p1, k[0], dia[0], moore[0], uc.reading});
  }

  {
    // ES_0.99 = (112, 96) against c = 100: breach at w0 only, universal K.
    const double es0 = 112.0, es1 = 96.0, cap = 100.0;
    const double bp0 = es0 >= cap ? 1 : 0, bp1 = es1 >= cap ? 1 : 0;
    const Frame f = detail::two_world_frame(1, 1, 1, 1, bp0, bp1);
    const Proposition& p = f.proposition("p");
    cat.es_breach = {"ES breach (112,96) vs 100", bp0, bp1,
                     box(f, "M", p, pkg)[0], diamond(f, "M", p, pkg)[0],
                     refine_moore(f, "M", p, pkg)[0],
                     "breach occurs but lacks assurance robustness"};
  }
  {
    // Cascade q = (0,1) with belief anchored on the stress world.
    const Frame f = detail::two_world_frame(0, 1, 0, 1, 0, 1);
    const Proposition& q = f.proposition("p");
    cat.cascade = {"cascade q=(0,1), Gamma_B={w1}", 0, 1,
                   box(f, "M", q, pkg)[0], diamond(f, "M", q, pkg)[0],
                   dual(f, "M", q, pkg)[0],
                   "not actual, but adopted as a precautionary commitment"};
  }

  struct FrameCase {
    const char* name;
    double g[4];
  };
  const FrameCase frame_cases[] = {
      {"identity", {1, 0, 0, 1}},
      {"universal", {1, 1, 1, 1}},
      {"anchor w0", {1, 0, 1, 0}},
      {"anchor w1", {0, 1, 0, 1}},
  };
  for (const auto& fc : frame_cases) {
    Frame f(std::vector<std::string>{"w0", "w1"});
    f.add_relation("M", {fc.g[0], fc.g[1], fc.g[2], fc.g[3]});
    TwoWorldCatalog::FrameRow row;
    row.name = fc.name;
    row.profile = classify_frame(f, "M", pkg);
    // Factive everywhere iff reflexive (crisp): check by the profile.
    row.factive = row.profile.reflexive;
    cat.frames.push_back(row);
  }

  {
    const Frame f = detail::two_world_frame(a, b, c, d, x, y);
    const StatusBundle s = statuses(f, "M", f.proposition("p"), pkg);
    cat.fuzzy_box = s.box[0];
    cat.fuzzy_diamond = s.diamond[0];
    cat.fuzzy_dual = s.dual[0];
    cat.fuzzy_hesitation = s.hesitation[0];
  }
  return cat;
}

// The fuzzy liquidity configuration: K relevance (1, 0.6) from the actual
// world, B anchored entirely on the stress world, r = (0, 0.9).
inline Frame liquidity_frame() {
  Frame f(std::vector<std::string>{"w0", "w1"});
  f.add_relation("K", {1.0, 0.6, 0.6, 1.0});
  f.add_relation("B", {0.0, 1.0, 0.0, 1.0});
  f.add_proposition("r", Proposition({0.0, 0.9}));
  return f;
}

// Three-world contagion: every world's B-evidence is the stress pair
// {w1,w2}, so B is serial, transitive and euclidean but not reflexive.
inline Frame contagion_frame() {
  Frame f(std::vector<std::string>{"w0", "w1", "w2"});
  f.add_relation("B", {0, 1, 1, 0, 1, 1, 0, 1, 1});
  f.add_proposition("p", Proposition({0.0, 1.0, 1.0}));
  return f;
}

struct ContagionReport {
  double bp_w0 = 0.0;
  double p_w0 = 0.0;
  bool nonfactive = false;       // Bp(w0) > p(w0)
  double bp_w0_reflexive = 0.0;  // Bp(w0) once w0 is added to its own evidence
};

inline ContagionReport contagion_scenario(
    const AlgebraPackage& pkg = AlgebraPackage::godel()) {
  const Frame f = contagion_frame();
  const Proposition& p = f.proposition("p");
  ContagionReport rep;
  rep.bp_w0 = box(f, "B", p, pkg)[0];
  rep.p_w0 = p[0];
  rep.nonfactive = rep.bp_w0 > rep.p_w0;

  Frame g = contagion_frame();
  g.add_relation("B", {1, 1, 1, 0, 1, 1, 0, 1, 1});  // replace with reflexive w0 row
  rep.bp_w0_reflexive = box(g, "B", p, pkg)[0];
  return rep;
}

// Fuzzy evidence over a parameter grid from the exponential form
// gamma = exp(-(lambda_data*d_data + lambda_class*mismatch + lambda_theta*
// ||theta-theta'||^2)). Within one dataset and model class the first two
// terms are constant and fold into `constant_penalty`. Materializes the
// matrix; small grids only.
inline Frame exponential_parameter_frame(const GridAxis& mu,
                                         const GridAxis& sigma,
                                         double lambda_theta,
                                         double constant_penalty = 0.0) {
  if (!(lambda_theta >= 0.0) || !(constant_penalty >= 0.0))
    throw ValueError("exponential relation weights must be >= 0");
  const std::size_t n = mu.steps * sigma.steps;
  std::vector<std::string> names(n);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < mu.steps; ++i)
    for (std::size_t j = 0; j < sigma.steps; ++j) {
      const std::size_t w = i * sigma.steps + j;
      names[w] = "g" + std::to_string(i) + "_" + std::to_string(j);
      xs[w] = mu.coordinate(i);
      ys[w] = sigma.coordinate(j);
    }
  Frame f(std::move(names));
  std::vector<double> rel(n * n);
  const double scale = std::exp(-constant_penalty);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v = 0; v < n; ++v) {
      const double dx = xs[w] - xs[v], dy = ys[w] - ys[v];
      rel[w * n + v] = scale * std::exp(-lambda_theta * (dx * dx + dy * dy));
    }
  f.add_relation("K", std::move(rel));
  return f;
}

}  // namespace modalrisk
