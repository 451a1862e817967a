#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "modalrisk/modal.hpp"
#include "modalrisk/scenarios.hpp"

using namespace modalrisk;

namespace {

// Independent crisp oracle: evaluate box/diamond through explicit
// neighborhood sets instead of inf/sup over residua.
bool oracle_box(const Frame& f, std::string_view std_id, const Proposition& p,
                std::size_t w) {
  for (std::size_t v = 0; v < f.world_count(); ++v)
    if (f.gamma(std_id, w, v) == 1.0 && p[v] == 0.0) return false;
  return true;
}

bool oracle_diamond(const Frame& f, std::string_view std_id,
                    const Proposition& p, std::size_t w) {
  for (std::size_t v = 0; v < f.world_count(); ++v)
    if (f.gamma(std_id, w, v) == 1.0 && p[v] == 1.0) return true;
  return false;
}

Frame random_crisp_frame(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  Frame f(std::move(names));
  std::vector<double> rel(n * n);
  for (double& x : rel) x = static_cast<double>(rng() % 2);
  f.add_relation("M", std::move(rel));
  return f;
}

Proposition random_crisp_prop(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(rng() % 2);
  return Proposition(v);
}

}  // namespace

TEST_CASE("liquidity statuses at the actual world", "[modal]") {
  const Frame f = liquidity_frame();
  const AlgebraPackage pkg = AlgebraPackage::godel();
  const Proposition& r = f.proposition("r");

  const StatusBundle st = statuses(f, "K", r, pkg);
  REQUIRE(st.box[0] == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(st.diamond[0] == Catch::Approx(0.6).margin(1e-9));
  REQUIRE(st.dual[0] == Catch::Approx(0.9).margin(1e-9));
  REQUIRE(st.hesitation[0] == Catch::Approx(0.9).margin(1e-9));

  // K not-r at w0 is 0.1, so non-exclusion is 0.9.
  REQUIRE(box(f, "K", negate(r), pkg)[0] == Catch::Approx(0.1).margin(1e-9));

  // Working commitment anchored on the stress state.
  REQUIRE(box(f, "B", r, pkg)[0] == Catch::Approx(0.9).margin(1e-9));
}

TEST_CASE("empty neighborhood gives vacuous box and empty diamond",
          "[modal]") {
  Frame f(std::vector<std::string>{"w0", "w1"});
  f.add_relation("M", {0, 0, 0, 1});
  const Proposition p(std::vector<double>{0.4, 0.7});
  for (const auto& pkg :
       {AlgebraPackage::godel(), AlgebraPackage::product(),
        AlgebraPackage::lukasiewicz()}) {
    REQUIRE(box(f, "M", p, pkg)[0] == 1.0);
    REQUIRE(diamond(f, "M", p, pkg)[0] == 0.0);
  }
}

TEST_CASE("status bundle matches the standalone operators", "[modal]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Frame f(std::vector<std::string>{"a", "b", "c"});
    std::vector<double> rel(9);
    for (double& x : rel) x = unit(rng);
    f.add_relation("M", std::move(rel));
    std::vector<double> pv(3);
    for (double& x : pv) x = unit(rng);
    const Proposition p(pv);

    for (const auto& pkg :
         {AlgebraPackage::godel(), AlgebraPackage::product(),
          AlgebraPackage::lukasiewicz()}) {
      const StatusBundle st = statuses(f, "M", p, pkg);
      const Proposition b = box(f, "M", p, pkg);
      const Proposition d = diamond(f, "M", p, pkg);
      const Proposition du = dual(f, "M", p, pkg);
      const Proposition h = hesitation(f, "M", p, pkg);
      const Proposition ic = inconsistency(f, "M", p, pkg);
      for (std::size_t w = 0; w < 3; ++w) {
        REQUIRE(st.box[w] == b[w]);
        REQUIRE(st.diamond[w] == d[w]);
        REQUIRE(st.dual[w] == du[w]);
        REQUIRE(st.hesitation[w] == h[w]);
        REQUIRE(st.inconsistency[w] == ic[w]);
        // Dual is negation of box of negation; hesitation clamps at zero.
        REQUIRE(du[w] ==
                Catch::Approx(1.0 - box(f, "M", negate(p), pkg)[w])
                    .margin(1e-12));
        REQUIRE(h[w] == Catch::Approx(std::max(0.0, du[w] - b[w]))
                            .margin(1e-12));
        REQUIRE(ic[w] ==
                Catch::Approx(std::min(b[w], box(f, "M", negate(p), pkg)[w]))
                    .margin(1e-12));
      }
    }
  }
}

TEST_CASE("crisp operators agree with set-semantics oracle", "[modal]") {
  std::mt19937_64 rng(1234);
  const AlgebraPackage pkg = AlgebraPackage::godel();
  for (int k = 0; k < 400; ++k) {
    const std::size_t n = 2 + rng() % 4;
    const Frame f = random_crisp_frame(rng, n);
    const Proposition p = random_crisp_prop(rng, n);
    const Proposition b = box(f, "M", p, pkg);
    const Proposition d = diamond(f, "M", p, pkg);
    const Proposition du = dual(f, "M", p, pkg);
    for (std::size_t w = 0; w < n; ++w) {
      REQUIRE(b[w] == (oracle_box(f, "M", p, w) ? 1.0 : 0.0));
      REQUIRE(d[w] == (oracle_diamond(f, "M", p, w) ? 1.0 : 0.0));
      // Crisp duality: diamond and dual coincide.
      REQUIRE(du[w] == d[w]);
    }
  }
}

TEST_CASE("monotonicity of box and diamond", "[modal]") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Frame f(std::vector<std::string>{"a", "b", "c", "d"});
    std::vector<double> rel(16);
    for (double& x : rel) x = unit(rng);
    f.add_relation("M", std::move(rel));
    std::vector<double> pv(4), qv(4);
    for (std::size_t i = 0; i < 4; ++i) {
      pv[i] = unit(rng);
      qv[i] = pv[i] + (1.0 - pv[i]) * unit(rng);  // q >= p
    }
    const Proposition p(pv), q(qv);
    for (const auto& pkg :
         {AlgebraPackage::godel(), AlgebraPackage::product(),
          AlgebraPackage::lukasiewicz()}) {
      REQUIRE(max_violation(box(f, "M", p, pkg), box(f, "M", q, pkg)) <=
              1e-12);
      REQUIRE(max_violation(diamond(f, "M", p, pkg),
                            diamond(f, "M", q, pkg)) <= 1e-12);
    }
  }
}

TEST_CASE("refinements and their names", "[modal]") {
  const Frame f = liquidity_frame();
  const AlgebraPackage pkg = AlgebraPackage::godel();
  const Proposition& r = f.proposition("r");

  const Proposition m = refine_moore(f, "K", r, pkg);
  REQUIRE(m[0] == Catch::Approx(std::min(0.0, 1.0)).margin(1e-12));
  REQUIRE(m[1] ==
          Catch::Approx(std::min(0.9, 1.0 - box(f, "K", r, pkg)[1]))
              .margin(1e-12));

  const Proposition a = refine_anti(f, "K", r, pkg);
  for (std::size_t w = 0; w < 2; ++w)
    REQUIRE(a[w] == Catch::Approx(std::min(
                        r[w], box(f, "K", negate(r), pkg)[w]))
                        .margin(1e-12));

  // Cross-standard refinements need two distinct standards.
  REQUIRE_THROWS_AS(refine_unsupported(f, "K", "K", r, pkg), FrameError);
  const Proposition u = refine_unsupported(f, "B", "K", r, pkg);
  const Proposition c = refine_conflict(f, "B", "K", r, pkg);
  for (std::size_t w = 0; w < 2; ++w) {
    REQUIRE(u[w] == Catch::Approx(std::min(
                        box(f, "B", r, pkg)[w],
                        1.0 - box(f, "K", r, pkg)[w]))
                        .margin(1e-12));
    REQUIRE(c[w] == Catch::Approx(std::min(
                        box(f, "B", r, pkg)[w],
                        box(f, "K", negate(r), pkg)[w]))
                        .margin(1e-12));
  }

  REQUIRE(refinement_name(RefinementKind::Moore) == "moore");
  REQUIRE(refinement_name(RefinementKind::Anti) == "anti");
  REQUIRE(refinement_name(RefinementKind::Unsup) == "unsup");
  REQUIRE(refinement_name(RefinementKind::Conf) == "conf");

  REQUIRE(refine(f, RefinementKind::Moore, "K", r, pkg).values() == m.values());
  REQUIRE(refine(f, RefinementKind::Unsup, "K", r, pkg, "B").values() ==
          u.values());
  REQUIRE_THROWS_AS(refine(f, RefinementKind::Conf, "K", r, pkg), FrameError);
}

TEST_CASE("global uncertainty and inconsistency over families", "[modal]") {
  REQUIRE(global_uncertainty({}, 0) == 0.0);

  const Proposition crisp1(std::vector<double>{1, 0});
  const Proposition crisp2(std::vector<double>{0, 1});
  REQUIRE(global_uncertainty({crisp1, crisp2}, 0) == 0.0);

  const Proposition half(std::vector<double>{0.5, 0.5});
  REQUIRE(global_uncertainty({half}, 0) == 0.5);

  const Proposition a(std::vector<double>{0.9, 0.9});
  const Proposition b(std::vector<double>{0.3, 0.3});
  REQUIRE(global_uncertainty({a, b}, 0) == Catch::Approx(0.3).margin(1e-12));

  const Frame f = liquidity_frame();
  const AlgebraPackage pkg = AlgebraPackage::godel();
  const Proposition gi =
      global_inconsistency(f, "K", {f.proposition("r")}, pkg);
  const Proposition direct = inconsistency(f, "K", f.proposition("r"), pkg);
  REQUIRE(gi.values() == direct.values());
}

TEST_CASE("aggregated operators average over local measures", "[modal]") {
  const AlgebraPackage pkg = AlgebraPackage::godel();
  Frame f(std::vector<std::string>{"w", "u"});
  f.add_relation("M", {1, 1, 1, 1});
  f.set_measure("w", {0.5, 0.5});
  f.set_measure("u", {0.5, 0.5});
  const Proposition p(std::vector<double>{0, 1});

  REQUIRE(box_agg(f, "M", p, pkg)[0] == 0.5);
  REQUIRE(diamond_agg(f, "M", p, pkg)[0] == 0.5);

  // Without a stored measure the uniform crisp fallback applies.
  Frame g(std::vector<std::string>{"w", "u"});
  g.add_relation("M", {1, 1, 1, 1});
  REQUIRE(box_agg(g, "M", p, pkg)[0] == 0.5);

  REQUIRE_THROWS_AS(require_measure({0.5, 0.4}, 2), ValueError);
  REQUIRE_NOTHROW(require_measure({0.5, 0.5}, 2));
}

TEST_CASE("event and level probabilities", "[modal]") {
  const Proposition p(std::vector<double>{0.2, 0.8, 1.0});
  const std::vector<double> mu{0.5, 0.25, 0.25};
  REQUIRE(fuzzy_event_probability(p, mu) ==
          Catch::Approx(0.2 * 0.5 + 0.8 * 0.25 + 1.0 * 0.25).margin(1e-12));
  REQUIRE(level_probability(p, mu, 0.8) == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(level_probability(p, mu, 0.1) == 1.0);

  Frame f(std::vector<std::string>{"a", "b", "c"});
  f.add_relation("M", {1, 1, 0, 0, 1, 0, 0, 0, 1});
  f.add_proposition("p", p);
  // Uniform over {a,b}: expectation of p is (0.2+0.8)/2.
  REQUIRE(local_probability(f, "M", p, 0) ==
          Catch::Approx(0.5).margin(1e-12));
}
