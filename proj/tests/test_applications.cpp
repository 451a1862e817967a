#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "modalrisk/scenarios.hpp"

using namespace modalrisk;

namespace {

// Crisp two-world reference semantics at w0: evidence set {v : g_v = 1}.
struct TwoWorldOracle {
  double box, diamond, dual;
};

TwoWorldOracle crisp_two_world(double g0, double g1, double p0, double p1) {
  TwoWorldOracle o{1.0, 0.0, 0.0};
  double box_neg = 1.0;
  if (g0 != 0.0) {
    o.box = std::min(o.box, p0);
    o.diamond = std::max(o.diamond, p0);
    box_neg = std::min(box_neg, 1.0 - p0);
  }
  if (g1 != 0.0) {
    o.box = std::min(o.box, p1);
    o.diamond = std::max(o.diamond, p1);
    box_neg = std::min(box_neg, 1.0 - p1);
  }
  o.dual = 1.0 - box_neg;
  return o;
}

// Full-scan neighborhood classification, no bounding box, used as the
// oracle for the production sweep.
struct GridOracle {
  std::vector<std::uint8_t> kp, dia;
  std::vector<double> rho;
};

// Full scan over every cell pair, no window clamping. The distance formula
// matches the production sweep bit for bit (index difference times step);
// cells exactly on the ball boundary would otherwise flip on rounding.
GridOracle classify_by_full_scan(const RegionGrid& g) {
  GridOracle o;
  o.kp.assign(g.cells(), 0);
  o.dia.assign(g.cells(), 0);
  o.rho.assign(g.cells(), 0.0);
  const double r2 = g.radius * g.radius;
  for (std::size_t ix = 0; ix < g.x.steps; ++ix)
    for (std::size_t iy = 0; iy < g.y.steps; ++iy) {
      bool all = true, any = false;
      std::size_t total = 0, hits = 0;
      for (std::size_t jx = 0; jx < g.x.steps; ++jx)
        for (std::size_t jy = 0; jy < g.y.steps; ++jy) {
          const double dx =
              (static_cast<double>(jx) - static_cast<double>(ix)) * g.x.step();
          const double dy =
              (static_cast<double>(jy) - static_cast<double>(iy)) * g.y.step();
          if (g.metric_x * dx * dx + g.metric_y * dy * dy > r2) continue;
          ++total;
          if (g.p[g.index(jx, jy)]) {
            ++hits;
            any = true;
          } else {
            all = false;
          }
        }
      const std::size_t i = g.index(ix, iy);
      REQUIRE(total >= 1);
      o.kp[i] = all ? 1 : 0;
      o.dia[i] = any ? 1 : 0;
      o.rho[i] = static_cast<double>(hits) / static_cast<double>(total);
    }
  return o;
}

}  // namespace

TEST_CASE("lognormal var and es match the closed forms", "[applications]") {
  const double tol = 1e-9;

  REQUIRE(normal_quantile(0.99) ==
          Catch::Approx(2.3263478740408408).margin(1e-12));

  const auto [var_std, es_std] = lognormal_var_es({0.0, 1.0}, 0.99);
  REQUIRE(var_std == Catch::Approx(10.240473656312131).margin(tol));
  REQUIRE(es_std == Catch::Approx(15.227960300878111).margin(tol));

  const auto [var_mid, es_mid] = lognormal_var_es({0.5, 0.5}, 0.95);
  REQUIRE(var_mid == Catch::Approx(3.7525169949243193).margin(tol));
  REQUIRE(es_mid == Catch::Approx(4.713020272820027).margin(tol));

  const auto [var_tight, es_tight] = lognormal_var_es({1.0, 0.3}, 0.99);
  REQUIRE(var_tight == Catch::Approx(5.462487992294042).margin(tol));
  REQUIRE(es_tight == Catch::Approx(6.074799896634586).margin(tol));

  SECTION("es dominates var and both grow with alpha") {
    for (double alpha : {0.5, 0.9, 0.95, 0.99, 0.999}) {
      const auto [var, es] = lognormal_var_es({0.0, 1.0}, alpha);
      REQUIRE(es > var);
    }
    REQUIRE(lognormal_var(0.0, 1.0, 0.99) > lognormal_var(0.0, 1.0, 0.95));
    REQUIRE(lognormal_es(0.0, 1.0, 0.99) > lognormal_es(0.0, 1.0, 0.95));
  }

  SECTION("domain validation") {
    REQUIRE_THROWS_AS(LognormalModelState(0.0, 0.0), ValueError);
    REQUIRE_THROWS_AS(LognormalModelState(0.0, -1.0), ValueError);
    REQUIRE_THROWS_AS(lognormal_var(0.0, 1.0, 0.0), ValueError);
    REQUIRE_THROWS_AS(lognormal_var(0.0, 1.0, 1.0), ValueError);
    REQUIRE_THROWS_AS(lognormal_es(0.0, -2.0, 0.5), ValueError);
    REQUIRE_THROWS_AS(normal_quantile(0.0), ValueError);
    REQUIRE_THROWS_AS(normal_quantile(1.0), ValueError);
  }
}

TEST_CASE("normal quantile and cdf invert each other", "[applications]") {
  for (double a = 0.001; a < 1.0; a += 0.007) {
    REQUIRE(normal_cdf(normal_quantile(a)) == Catch::Approx(a).margin(1e-12));
    REQUIRE(normal_quantile(1.0 - a) ==
            Catch::Approx(-normal_quantile(a)).margin(1e-11));
  }
  REQUIRE(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("monte carlo agrees with the closed forms", "[applications]") {
  // Reduced-draw cross-check; the tolerance is ~5 standard errors at this N.
  const std::size_t n = 400000;
  const double alpha = 0.99;
  const LognormalModelState model{0.0, 1.0};

  std::mt19937_64 rng(20240917);
  std::lognormal_distribution<double> dist(model.mu, model.sigma);
  std::vector<double> draws(n);
  for (auto& d : draws) d = dist(rng);

  const std::size_t tail_at =
      static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n))) - 1;
  std::nth_element(draws.begin(),
                   draws.begin() + static_cast<std::ptrdiff_t>(tail_at),
                   draws.end());
  const double mc_var = draws[tail_at];
  double tail_sum = 0.0;
  std::size_t tail_n = 0;
  for (std::size_t i = tail_at; i < n; ++i) {
    tail_sum += draws[i];
    ++tail_n;
  }
  const double mc_es = tail_sum / static_cast<double>(tail_n);

  const auto [var, es] = lognormal_var_es(model, alpha);
  REQUIRE(mc_var == Catch::Approx(var).epsilon(0.04));
  REQUIRE(mc_es == Catch::Approx(es).epsilon(0.04));
}

TEST_CASE("two-world evidence-set table matches direct enumeration",
          "[applications]") {
  const auto pkg = AlgebraPackage::godel();
  const TwoWorldCatalog cat = two_world_catalog(pkg);
  REQUIRE(cat.evidence_sets.size() == 16);

  const double gammas[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const char* names[4] = {"empty", "{w0}", "{w1}", "{w0,w1}"};
  std::size_t row = 0;
  for (int ec = 0; ec < 4; ++ec) {
    for (int bits = 0; bits < 4; ++bits, ++row) {
      const TwoWorldRow& r = cat.evidence_sets[row];
      REQUIRE(r.setting == names[ec]);
      REQUIRE(r.p0 == (bits & 1 ? 1.0 : 0.0));
      REQUIRE(r.p1 == (bits & 2 ? 1.0 : 0.0));
      const TwoWorldOracle o =
          crisp_two_world(gammas[ec][0], gammas[ec][1], r.p0, r.p1);
      REQUIRE(r.box == o.box);
      REQUIRE(r.diamond == o.diamond);
      REQUIRE(r.third == o.dual);
    }
  }

  SECTION("the four evidence regimes reduce to the expected formulas") {
    for (int bits = 0; bits < 4; ++bits) {
      const double p0 = bits & 1 ? 1.0 : 0.0;
      const double p1 = bits & 2 ? 1.0 : 0.0;
      const TwoWorldRow& empty = cat.evidence_sets[0 + bits];
      REQUIRE(empty.box == 1.0);      // vacuous support
      REQUIRE(empty.diamond == 0.0);
      REQUIRE(empty.third == 0.0);
      const TwoWorldRow& only0 = cat.evidence_sets[4 + bits];
      REQUIRE(only0.box == p0);
      REQUIRE(only0.diamond == p0);
      REQUIRE(only0.third == p0);
      const TwoWorldRow& only1 = cat.evidence_sets[8 + bits];
      REQUIRE(only1.box == p1);
      const TwoWorldRow& both = cat.evidence_sets[12 + bits];
      REQUIRE(both.box == std::min(p0, p1));
      REQUIRE(both.diamond == std::max(p0, p1));
      REQUIRE(both.third == std::max(p0, p1));
    }
  }
}

TEST_CASE("universal-frame stance table pins the four crisp cases",
          "[applications]") {
  const TwoWorldCatalog cat = two_world_catalog(AlgebraPackage::godel());
  REQUIRE(cat.universal_cases.size() == 4);

  // (p0, p1) -> (Kp, <K>p, moore) at w0 under the universal relation.
  struct Expect {
    const char* setting;
    double box, dia, moore;
  };
  const Expect want[4] = {
      {"(0,0)", 0, 0, 0},
      {"(1,0)", 0, 1, 1},  // Moorean: actual but not endorsed
      {"(0,1)", 0, 1, 0},
      {"(1,1)", 1, 1, 0},
  };
  for (int i = 0; i < 4; ++i) {
    const TwoWorldRow& r = cat.universal_cases[i];
    REQUIRE(r.setting == want[i].setting);
    REQUIRE(r.box == want[i].box);
    REQUIRE(r.diamond == want[i].dia);
    REQUIRE(r.third == want[i].moore);
  }
  REQUIRE(cat.universal_cases[1].reading ==
          "actual risk, but not assurance-endorsed");
}

TEST_CASE("breach, cascade and frame-survey rows", "[applications]") {
  const TwoWorldCatalog cat = two_world_catalog(AlgebraPackage::godel());

  // ES = (112, 96) against c = 100 puts only w0 in breach: the breach is
  // actual and possible but not assurance-robust.
  REQUIRE(cat.es_breach.p0 == 1.0);
  REQUIRE(cat.es_breach.p1 == 0.0);
  REQUIRE(cat.es_breach.box == 0.0);
  REQUIRE(cat.es_breach.diamond == 1.0);
  REQUIRE(cat.es_breach.third == 1.0);  // moore degree

  // Cascade: belief anchored on the stress world endorses a non-actual q.
  REQUIRE(cat.cascade.box == 1.0);
  REQUIRE(cat.cascade.diamond == 1.0);
  REQUIRE(cat.cascade.third == 1.0);  // dual
  REQUIRE(cat.cascade.p0 == 0.0);

  REQUIRE(cat.frames.size() == 4);
  REQUIRE(cat.frames[0].name == "identity");
  REQUIRE(cat.frames[0].factive);
  REQUIRE(cat.frames[0].profile.equivalence);
  REQUIRE(cat.frames[1].name == "universal");
  REQUIRE(cat.frames[1].factive);
  REQUIRE(cat.frames[1].profile.euclidean);
  REQUIRE(cat.frames[2].name == "anchor w0");
  REQUIRE_FALSE(cat.frames[2].factive);  // w1 not in its own evidence
  REQUIRE(cat.frames[2].profile.serial);
  REQUIRE(cat.frames[2].profile.transitive);
  REQUIRE(cat.frames[2].profile.euclidean);
  REQUIRE_FALSE(cat.frames[2].profile.symmetric);
  REQUIRE(cat.frames[3].name == "anchor w1");
  REQUIRE_FALSE(cat.frames[3].factive);
}

TEST_CASE("fuzzy two-world row reproduces the liquidity statuses",
          "[applications]") {
  const TwoWorldCatalog cat = two_world_catalog(AlgebraPackage::godel());
  REQUIRE(cat.fuzzy_box == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(cat.fuzzy_diamond == Catch::Approx(0.6).margin(1e-12));
  REQUIRE(cat.fuzzy_dual == Catch::Approx(0.9).margin(1e-12));
  REQUIRE(cat.fuzzy_hesitation == Catch::Approx(0.9).margin(1e-12));

  // Custom parameters flow through to the fuzzy row.
  const TwoWorldCatalog flat =
      two_world_catalog(AlgebraPackage::godel(), 1, 1, 1, 1, 0.3, 0.3);
  REQUIRE(flat.fuzzy_box == Catch::Approx(0.3).margin(1e-12));
  REQUIRE(flat.fuzzy_hesitation == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("model-risk grid matches a full-scan oracle", "[applications]") {
  ModelRiskParams params;
  params.mu.steps = 41;
  params.sigma.steps = 41;
  const RegionGrid g = model_risk_grid(params);

  REQUIRE(g.cells() == 41u * 41u);
  REQUIRE(g.metric_x == Catch::Approx(100.0));
  REQUIRE(g.radius == 1.0);

  // Membership comes from the ES closed form.
  for (std::size_t ix = 0; ix < g.x.steps; ++ix)
    for (std::size_t iy = 0; iy < g.y.steps; ++iy) {
      const double es = lognormal_es(g.x.coordinate(ix), g.y.coordinate(iy),
                                     params.alpha);
      REQUIRE(g.p[g.index(ix, iy)] == (es >= params.c ? 1 : 0));
    }

  const GridOracle o = classify_by_full_scan(g);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    REQUIRE(g.kp[i] == o.kp[i]);
    REQUIRE(g.dia[i] == o.dia[i]);
    REQUIRE(g.rho[i] == Catch::Approx(o.rho[i]).margin(1e-12));
  }

  SECTION("labels partition the grid and nest") {
    const auto counts = g.label_counts();
    REQUIRE(counts[0] + counts[1] + counts[2] + counts[3] == g.cells());
    for (std::size_t c : counts) REQUIRE(c > 0);
    for (std::size_t i = 0; i < g.cells(); ++i) {
      REQUIRE(g.kp[i] <= g.p[i]);    // robust cells are breach cells
      REQUIRE(g.p[i] <= g.dia[i]);   // breach cells are possible cells
      if (g.kp[i]) REQUIRE(g.rho[i] == 1.0);
      REQUIRE((g.dia[i] != 0) == (g.rho[i] > 0.0));
    }
  }

  SECTION("parameter validation") {
    ModelRiskParams bad = params;
    bad.beta_mu = 0.0;
    REQUIRE_THROWS_AS(model_risk_grid(bad), ValueError);
    bad = params;
    bad.alpha = 1.0;
    REQUIRE_THROWS_AS(model_risk_grid(bad), ValueError);
    bad = params;
    bad.sigma.lo = 0.0;
    REQUIRE_THROWS_AS(model_risk_grid(bad), ValueError);
    bad = params;
    bad.mu.steps = 1;
    REQUIRE_THROWS_AS(model_risk_grid(bad), FrameError);
  }
}

TEST_CASE("flood grid nests and its hesitation band grows with tolerance",
          "[applications]") {
  FloodParams params;
  params.x.steps = 81;
  params.y.steps = 81;

  std::size_t last_band = 0;
  for (double beta : {0.04, 0.08, 0.16}) {
    params.beta = beta;
    const RegionGrid g = flood_grid(params);
    for (std::size_t i = 0; i < g.cells(); ++i) {
      REQUIRE(g.kp[i] <= g.p[i]);
      REQUIRE(g.p[i] <= g.dia[i]);
      REQUIRE(g.rho[i] >= 0.0);
      REQUIRE(g.rho[i] <= 1.0);
      if (g.kp[i]) REQUIRE(g.rho[i] == 1.0);
    }
    const std::size_t band = g.hesitation_band_cells();
    REQUIRE(band >= last_band);
    last_band = band;
  }
  REQUIRE(last_band > 0);

  SECTION("small grid agrees with the full-scan oracle") {
    params.beta = 0.12;
    params.x.steps = 33;
    params.y.steps = 33;
    const RegionGrid g = flood_grid(params);
    const GridOracle o = classify_by_full_scan(g);
    for (std::size_t i = 0; i < g.cells(); ++i) {
      REQUIRE(g.kp[i] == o.kp[i]);
      REQUIRE(g.dia[i] == o.dia[i]);
      REQUIRE(g.rho[i] == Catch::Approx(o.rho[i]).margin(1e-12));
    }
  }

  SECTION("validation") {
    FloodParams bad;
    bad.a_x = 0.0;
    REQUIRE_THROWS_AS(flood_grid(bad), ValueError);
    bad = FloodParams{};
    bad.beta = -0.1;
    REQUIRE_THROWS_AS(flood_grid(bad), ValueError);
    bad = FloodParams{};
    bad.x.steps = 1;
    REQUIRE_THROWS_AS(flood_grid(bad), FrameError);
  }
}

TEST_CASE("flood quadrants follow the modal/probability rule",
          "[applications]") {
  FloodParams params;
  params.x.steps = 81;
  params.y.steps = 81;
  const RegionGrid g = flood_grid(params);

  const double rho_high = 0.9, rho_low = 0.1;
  const auto quads = flood_quadrants(g, params.beta, rho_high, rho_low);
  REQUIRE(quads.size() == g.cells());

  std::array<std::size_t, 4> seen{0, 0, 0, 0};
  for (std::size_t i = 0; i < quads.size(); ++i) {
    const QuadrantLabel& q = quads[i];
    ++seen[static_cast<std::size_t>(q.quadrant)];
    REQUIRE(q.modal == (g.kp[i] != 0));
    REQUIRE(q.local_prob == Catch::Approx(g.rho[i]).margin(1e-12));

    const bool fragile = !q.modal && q.local_prob >= rho_high;
    REQUIRE((q.quadrant == Quadrant::LikelyFragile) == fragile);
    if (q.modal) REQUIRE(q.quadrant == Quadrant::RobustLikely);

    switch (q.quadrant) {
      case Quadrant::RobustLikely:
        REQUIRE(q.action == QuadrantAction::Endorse);
        break;
      case Quadrant::RobustUnlikely:
        REQUIRE(q.action == QuadrantAction::SeverityReview);
        break;
      case Quadrant::LikelyFragile:
        REQUIRE(q.action == QuadrantAction::EscalateInspect);
        break;
      case Quadrant::UnlikelyUnsupported:
        REQUIRE(q.action == (g.dia[i] ? QuadrantAction::Monitor
                                      : QuadrantAction::CloseWithJustification));
        break;
    }
  }
  // Full-support uniform neighborhoods force Kp=1 => rho=1, so the
  // robust-but-unlikely branch stays empty here; the other three are live.
  REQUIRE(seen[static_cast<std::size_t>(Quadrant::RobustLikely)] > 0);
  REQUIRE(seen[static_cast<std::size_t>(Quadrant::RobustUnlikely)] == 0);
  REQUIRE(seen[static_cast<std::size_t>(Quadrant::LikelyFragile)] > 0);
  REQUIRE(seen[static_cast<std::size_t>(Quadrant::UnlikelyUnsupported)] > 0);

  REQUIRE(quadrant_name(Quadrant::LikelyFragile) == "likely_fragile");
  REQUIRE(quadrant_action_name(QuadrantAction::CloseWithJustification) ==
          "close_with_audit_justification");

  SECTION("threshold validation") {
    REQUIRE_THROWS_AS(flood_quadrants(g, params.beta, 0.1, 0.9), ValueError);
    REQUIRE_THROWS_AS(flood_quadrants(g, params.beta, 0.5, 0.5), ValueError);
    REQUIRE_THROWS_AS(flood_quadrants(g, params.beta, 1.2, 0.1), ValueError);
    REQUIRE_THROWS_AS(flood_quadrants(g, 0.0, 0.9, 0.1), ValueError);
  }
}

TEST_CASE("csv and pgm exports have the documented shape", "[applications]") {
  FloodParams params;
  params.x.steps = 5;
  params.y.steps = 5;
  params.beta = 0.3;
  const RegionGrid g = flood_grid(params);

  std::ostringstream csv;
  g.write_csv(csv);
  std::istringstream lines(csv.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  REQUIRE(line == "x,y,p,Kp,DiaKp,label,rho");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::size_t commas = 0;
    for (char ch : line)
      if (ch == ',') ++commas;
    REQUIRE(commas == 6);
  }
  REQUIRE(rows == g.cells());
  // First data row is the origin cell with 6-decimal coordinates.
  REQUIRE(csv.str().find("\n0.000000,0.000000,") != std::string::npos);

  std::ostringstream pgm;
  g.write_pgm(pgm);
  std::istringstream ps(pgm.str());
  std::string magic;
  std::size_t w = 0, h = 0;
  int maxval = 0;
  ps >> magic >> w >> h >> maxval;
  REQUIRE(magic == "P2");
  REQUIRE(w == g.x.steps);
  REQUIRE(h == g.y.steps);
  REQUIRE(maxval == 255);
  std::size_t pixels = 0;
  for (int grey; ps >> grey; ++pixels) {
    const bool known =
        grey == 0 || grey == 85 || grey == 170 || grey == 255;
    REQUIRE(known);
  }
  REQUIRE(pixels == g.cells());
}

TEST_CASE("contagion scenario endorses a false proposition", "[applications]") {
  const ContagionReport rep = contagion_scenario();
  REQUIRE(rep.bp_w0 == 1.0);
  REQUIRE(rep.p_w0 == 0.0);
  REQUIRE(rep.nonfactive);
  // Adding w0 to its own evidence restores factivity and kills the belief.
  REQUIRE(rep.bp_w0_reflexive == 0.0);
}

TEST_CASE("exponential parameter frame has similarity structure",
          "[applications]") {
  const GridAxis mu{"mu", 0.0, 1.0, 3};
  const GridAxis sigma{"sigma", 0.0, 1.0, 2};
  const Frame f = exponential_parameter_frame(mu, sigma, 2.0, 0.3);

  REQUIRE(f.world_count() == 6);
  REQUIRE(f.world_index("g0_0") == 0);
  REQUIRE(f.world_index("g2_1") == 5);

  const auto& rel = f.relation("K");
  const double self = std::exp(-0.3);
  for (std::size_t w = 0; w < 6; ++w)
    REQUIRE(rel[w * 6 + w] == Catch::Approx(self).margin(1e-15));
  for (std::size_t w = 0; w < 6; ++w)
    for (std::size_t v = 0; v < 6; ++v)
      REQUIRE(rel[w * 6 + v] == Catch::Approx(rel[v * 6 + w]).margin(1e-15));

  // g0_0 = (0,0) against g1_1 = (0.5,1): distance^2 = 1.25.
  REQUIRE(rel[0 * 6 + 3] ==
          Catch::Approx(std::exp(-0.3 - 2.0 * 1.25)).margin(1e-15));

  // Zero weights give the universal frame without the penalty.
  const Frame u = exponential_parameter_frame(mu, sigma, 0.0);
  const auto prof = classify_frame(u, "K", AlgebraPackage::godel());
  REQUIRE(prof.crisp);
  REQUIRE(prof.equivalence);

  REQUIRE_THROWS_AS(exponential_parameter_frame(mu, sigma, -1.0), ValueError);
  REQUIRE_THROWS_AS(exponential_parameter_frame(mu, sigma, 1.0, -0.5),
                    ValueError);
}
