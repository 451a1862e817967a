// Command-line front end: evaluate formulas on frame files, reproduce the
// shipped scenarios, run the property suites, and apply governance rules.
// Exit codes: 0 success, 1 domain error, 2 usage or parse error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "modalrisk/governance.hpp"
#include "modalrisk/properties.hpp"
#include "modalrisk/scenarios.hpp"

namespace fs = std::filesystem;
using namespace modalrisk;

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

std::string fmt_short(double v) {  // crisp table entries print as 0/1
  std::ostringstream out;
  out << v;
  return out.str();
}

AlgebraPackage package_flag(const std::string& name) {
  return AlgebraPackage::from_name(name);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ValueError("cannot write " + path.string());
  return out;
}

// --- eval ------------------------------------------------------------------

int cmd_eval(const std::string& frame_path, const std::string& formula_text,
             const std::string& world, const std::string& package) {
  const AlgebraPackage pkg = package_flag(package);
  const Frame f = Frame::from_file(frame_path);
  const Formula formula = parse_formula(formula_text);
  const Proposition vals = evaluate(formula, f, pkg);
  if (!world.empty()) {
    std::cout << fmt(vals[f.world_index(world)]) << '\n';
  } else {
    for (std::size_t w = 0; w < vals.size(); ++w)
      std::cout << f.world_name(w) << ' ' << fmt(vals[w]) << '\n';
  }
  return 0;
}

// --- example ---------------------------------------------------------------

void write_two_world_csv(const fs::path& dir, const TwoWorldCatalog& cat) {
  std::ofstream out = open_out(dir / "two_world.csv");
  out << "section,setting,p0,p1,box,diamond,third,reading\n";
  auto row = [&](const char* section, const TwoWorldRow& r) {
    out << section << ",\"" << r.setting << "\"," << fmt_short(r.p0) << ','
        << fmt_short(r.p1) << ',' << fmt(r.box) << ',' << fmt(r.diamond)
        << ',' << fmt(r.third) << ",\"" << r.reading << "\"\n";
  };
  for (const TwoWorldRow& r : cat.evidence_sets) row("evidence", r);
  for (const TwoWorldRow& r : cat.universal_cases) row("universal", r);
  row("es_breach", cat.es_breach);
  row("cascade", cat.cascade);
  out << "fuzzy,liquidity,,," << fmt(cat.fuzzy_box) << ','
      << fmt(cat.fuzzy_diamond) << ',' << fmt(cat.fuzzy_dual) << ",\"H="
      << fmt(cat.fuzzy_hesitation) << "\"\n";
}

int cmd_example_two_world(const std::string& package, const fs::path& out_dir,
                          double a, double b, double c, double d, double x,
                          double y) {
  const AlgebraPackage pkg = package_flag(package);
  const TwoWorldCatalog cat = two_world_catalog(pkg, a, b, c, d, x, y);

  std::cout << "evidence sets (box, diamond, dual at w0):\n";
  for (const TwoWorldRow& r : cat.evidence_sets)
    std::cout << "  " << r.setting << " p=(" << fmt_short(r.p0) << ','
              << fmt_short(r.p1) << ") " << fmt(r.box) << ' ' << fmt(r.diamond)
              << ' ' << fmt(r.third) << '\n';
  std::cout << "universal K (box, diamond, moore at w0):\n";
  for (const TwoWorldRow& r : cat.universal_cases)
    std::cout << "  " << r.setting << ' ' << fmt(r.box) << ' '
              << fmt(r.diamond) << ' ' << fmt(r.third) << "  " << r.reading
              << '\n';
  std::cout << "es breach: " << fmt(cat.es_breach.box) << ' '
            << fmt(cat.es_breach.diamond) << ' ' << fmt(cat.es_breach.third)
            << '\n';
  std::cout << "cascade: " << fmt(cat.cascade.box) << ' '
            << fmt(cat.cascade.diamond) << ' ' << fmt(cat.cascade.third)
            << '\n';
  std::cout << "frames:\n";
  for (const auto& fr : cat.frames)
    std::cout << "  " << fr.name << " factive="
              << (fr.factive ? "true" : "false") << '\n';
  std::cout << "fuzzy row: box=" << fmt(cat.fuzzy_box)
            << " diamond=" << fmt(cat.fuzzy_diamond)
            << " dual=" << fmt(cat.fuzzy_dual)
            << " hesitation=" << fmt(cat.fuzzy_hesitation) << '\n';

  fs::create_directories(out_dir);
  write_two_world_csv(out_dir, cat);
  return 0;
}

void write_grid_files(const fs::path& dir, const std::string& stem,
                      const RegionGrid& grid) {
  fs::create_directories(dir);
  std::ofstream csv = open_out(dir / (stem + ".csv"));
  grid.write_csv(csv);
  std::ofstream pgm = open_out(dir / (stem + ".pgm"));
  grid.write_pgm(pgm);
}

void print_label_counts(const RegionGrid& grid) {
  const auto counts = grid.label_counts();
  std::cout << "cells=" << grid.cells()
            << " robust=" << counts[0] << " moore=" << counts[1]
            << " possible_only=" << counts[2] << " excluded=" << counts[3]
            << " band=" << grid.hesitation_band_cells() << '\n';
}

int cmd_example_model_risk(const ModelRiskParams& params,
                           const fs::path& out_dir) {
  const RegionGrid grid = model_risk_grid(params);
  print_label_counts(grid);
  write_grid_files(out_dir, "model_risk", grid);
  return 0;
}

int cmd_example_flood(const FloodParams& params, double rho_high,
                      double rho_low, const fs::path& out_dir) {
  const RegionGrid grid = flood_grid(params);
  print_label_counts(grid);
  const auto quads =
      flood_quadrants(grid, params.beta > 0.0 ? params.beta
                                              : std::nextafter(0.0, 1.0),
                      rho_high, rho_low);
  std::array<std::size_t, 4> counts{0, 0, 0, 0};
  for (const QuadrantLabel& q : quads)
    ++counts[static_cast<std::size_t>(q.quadrant)];
  std::cout << "quadrants robust_likely=" << counts[0]
            << " robust_unlikely=" << counts[1]
            << " likely_fragile=" << counts[2]
            << " unlikely_unsupported=" << counts[3] << '\n';
  write_grid_files(out_dir, "flood", grid);
  return 0;
}

int cmd_example_contagion() {
  const ContagionReport rep = contagion_scenario();
  std::cout << "Bp(w0)=" << fmt_short(rep.bp_w0)
            << " p(w0)=" << fmt_short(rep.p_w0)
            << " nonfactive=" << (rep.nonfactive ? "true" : "false") << '\n';
  return 0;
}

// --- check -----------------------------------------------------------------

nlohmann::ordered_json principle_json(const PrincipleReport& rep) {
  nlohmann::ordered_json doc;
  doc["principle"] = std::string(principle_name(rep.principle));
  doc["gate"] = rep.gate;
  doc["holds"] = rep.holds;
  if (rep.witness) {
    doc["witness"] = {{"proposition", rep.witness->proposition},
                      {"world", rep.witness->world},
                      {"gap", rep.witness->gap}};
  }
  return doc;
}

nlohmann::ordered_json laws_json(const AlgebraPackage& pkg, bool* failed) {
  struct Case {
    const char* name;
    Frame frame;
    const char* standard;
  };
  std::vector<Case> cases;
  cases.push_back({"liquidity", liquidity_frame(), "K"});
  cases.push_back({"liquidity", liquidity_frame(), "B"});
  cases.push_back({"contagion", contagion_frame(), "B"});

  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Case& c : cases) {
    nlohmann::ordered_json doc;
    doc["frame"] = c.name;
    doc["standard"] = c.standard;
    nlohmann::ordered_json principles = nlohmann::ordered_json::array();
    for (const PrincipleReport& rep :
         check_package_laws(c.frame, c.standard, pkg)) {
      if (rep.gate && !rep.holds) *failed = true;
      principles.push_back(principle_json(rep));
    }
    doc["principles"] = std::move(principles);
    arr.push_back(std::move(doc));
  }
  return arr;
}

nlohmann::ordered_json aggregated_json(bool* failed) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BoundReport& rep : aggregated_counterexamples()) {
    if (!rep.skipped && !rep.satisfied) *failed = true;
    nlohmann::ordered_json doc;
    doc["bound_id"] = std::string(bound_id_name(rep.bound_id));
    doc["satisfied"] = rep.satisfied;
    doc["max_violation"] = rep.max_violation;
    doc["lhs"] = rep.lhs.values();
    doc["rhs"] = rep.rhs.values();
    arr.push_back(std::move(doc));
  }
  return arr;
}

nlohmann::ordered_json suites_json(const std::vector<SuiteResult>& results,
                                   bool* failed) {
  for (const SuiteResult& r : results)
    if (!r.satisfied) *failed = true;
  return suite_report_json(results);
}

int cmd_check(const std::string& suite, const std::string& package,
              std::uint64_t seed, std::size_t frames) {
  const AlgebraPackage pkg = package_flag(package);
  SuiteConfig cfg;
  cfg.seed = seed;
  cfg.frames_per_bound = frames;

  bool failed = false;
  nlohmann::ordered_json report;
  report["suite"] = suite;
  report["package"] = std::string(pkg.name());
  report["seed"] = seed;
  if (suite == "laws") {
    report["laws"] = laws_json(pkg, &failed);
  } else if (suite == "factive") {
    report["bounds"] = suites_json(run_factive_suite(pkg, cfg), &failed);
  } else if (suite == "belief") {
    report["bounds"] = suites_json(run_belief_suite(pkg, cfg), &failed);
  } else if (suite == "aggregated") {
    report["bounds"] = aggregated_json(&failed);
  } else {  // all
    report["laws"] = laws_json(pkg, &failed);
    report["bounds"] = suites_json(run_theorem_suite(pkg, cfg), &failed);
  }
  std::cout << report.dump(2) << '\n';
  return failed ? 1 : 0;
}

// --- govern ----------------------------------------------------------------

int cmd_govern(const std::string& frame_path, std::string prop,
               const std::string& standard, const GovernanceThresholds& th,
               const std::string& register_path) {
  const AlgebraPackage pkg = AlgebraPackage::godel();
  const Frame f = Frame::from_file(frame_path);
  if (prop.empty()) {
    const auto names = f.proposition_names();
    if (names.size() != 1)
      throw ValueError("--prop is required when the frame has " +
                       std::to_string(names.size()) + " propositions");
    prop = names.front();
  }
  const Proposition& p = f.proposition(prop);
  const StatusBundle bundle = statuses(f, standard, p, pkg);
  const Proposition moore = refine_moore(f, standard, p, pkg);

  for (std::size_t w = 0; w < f.world_count(); ++w) {
    const ActionSet acts = apply_rule(bundle, moore[w], th, w);
    std::cout << f.world_name(w) << ": ";
    if (acts.empty()) {
      std::cout << "none";
    } else {
      bool first = true;
      for (GovernanceAction a : acts) {
        if (!first) std::cout << ", ";
        std::cout << governance_action_name(a);
        first = false;
      }
    }
    std::cout << '\n';
  }

  if (!register_path.empty()) {
    AuditRegister reg;
    if (fs::exists(register_path)) {
      std::ifstream in(register_path);
      if (!in) throw ValueError("cannot read " + register_path);
      reg = AuditRegister::replay(in);
    }
    const std::string d_text = "[" + standard + "]" + prop;
    const std::string moore_text = prop + " & !" + d_text;
    for (std::size_t w = 0; w < f.world_count(); ++w)
      if (moore[w] >= th.delta && moore[w] > 0.0)
        reg.record({"moore", moore_text, standard, f.world_name(w)}, moore[w]);
    std::ofstream out = open_out(register_path);
    reg.write_events(out);
    std::cout << "register: " << reg.size() << " items, "
              << reg.events().size() << " events\n";
  }
  return 0;
}

// --- frame-validate ---------------------------------------------------------

int cmd_frame_validate(const std::string& frame_path,
                       const std::string& package) {
  const AlgebraPackage pkg = package_flag(package);
  const Frame f = Frame::from_file(frame_path);
  std::size_t measured = 0;
  for (std::size_t w = 0; w < f.world_count(); ++w)
    if (f.has_measure(w)) ++measured;
  std::cout << "ok: " << f.world_count() << " worlds, "
            << f.standards().size() << " standards, "
            << f.proposition_names().size() << " propositions, " << measured
            << " measures\n";
  for (const std::string& std_name : f.standards()) {
    const FrameProfile prof = classify_frame(f, std_name, pkg);
    std::cout << std_name << ": crisp=" << (prof.crisp ? "true" : "false")
              << " reflexive=" << (prof.reflexive ? "true" : "false")
              << " serial=" << (prof.serial ? "true" : "false")
              << " symmetric=" << (prof.symmetric ? "true" : "false")
              << " transitive=" << (prof.transitive ? "true" : "false")
              << " fuzzy_transitive="
              << (prof.fuzzy_transitive ? "true" : "false")
              << " euclidean=" << (prof.euclidean ? "true" : "false")
              << " equivalence=" << (prof.equivalence ? "true" : "false")
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy modal statuses for institutional risk"};
  app.require_subcommand(1);

  // eval
  std::string eval_frame, eval_formula, eval_world, eval_package = "godel";
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a formula on a frame");
  eval->add_option("frame", eval_frame, "Frame JSON file")->required();
  eval->add_option("formula", eval_formula, "Formula text")->required();
  eval->add_option("--world", eval_world, "Evaluate at one world only");
  eval->add_option("--package", eval_package, "Algebra package");

  // example
  CLI::App* example = app.add_subcommand("example", "Reproduce a scenario");
  example->require_subcommand(1);
  std::string ex_out = ".", ex_package = "godel";

  CLI::App* two_world =
      example->add_subcommand("two-world", "Crisp catalog and fuzzy row");
  double tw_a = 1.0, tw_b = 0.6, tw_c = 0.0, tw_d = 1.0, tw_x = 0.0,
         tw_y = 0.9;
  two_world->add_option("--a", tw_a, "gamma(w0,w0)");
  two_world->add_option("--b", tw_b, "gamma(w0,w1)");
  two_world->add_option("--c", tw_c, "gamma(w1,w0)");
  two_world->add_option("--d", tw_d, "gamma(w1,w1)");
  two_world->add_option("--x", tw_x, "p(w0)");
  two_world->add_option("--y", tw_y, "p(w1)");
  two_world->add_option("--out", ex_out, "Output directory");
  two_world->add_option("--package", ex_package, "Algebra package");

  CLI::App* model_risk =
      example->add_subcommand("model-risk", "Lognormal ES breach regions");
  ModelRiskParams mr;
  model_risk->add_option("--alpha", mr.alpha, "ES confidence level");
  model_risk->add_option("--c", mr.c, "Capital threshold");
  model_risk->add_option("--beta-mu", mr.beta_mu, "mu tolerance");
  model_risk->add_option("--beta-sigma", mr.beta_sigma, "sigma tolerance");
  model_risk->add_option("--mu-steps", mr.mu.steps, "mu grid steps");
  model_risk->add_option("--sigma-steps", mr.sigma.steps, "sigma grid steps");
  model_risk->add_option("--out", ex_out, "Output directory");

  CLI::App* flood =
      example->add_subcommand("flood", "Flood stress regions and quadrants");
  FloodParams fl;
  double fl_rho_high = 0.9, fl_rho_low = 0.1;
  flood->add_option("--c", fl.c, "Stress threshold");
  flood->add_option("--beta", fl.beta, "Tolerance radius");
  flood->add_option("--a-x", fl.a_x, "x metric weight");
  flood->add_option("--a-y", fl.a_y, "y metric weight");
  flood->add_option("--x-steps", fl.x.steps, "x grid steps");
  flood->add_option("--y-steps", fl.y.steps, "y grid steps");
  flood->add_option("--rho-high", fl_rho_high, "Likely threshold");
  flood->add_option("--rho-low", fl_rho_low, "Unlikely threshold");
  flood->add_option("--out", ex_out, "Output directory");

  CLI::App* contagion =
      example->add_subcommand("contagion", "Non-factive belief scenario");

  // check
  std::string check_suite, check_package = "godel";
  std::uint64_t check_seed = 20250406;
  std::size_t check_frames = 1000;
  CLI::App* check = app.add_subcommand("check", "Run property suites");
  check
      ->add_option("suite", check_suite,
                   "laws | factive | belief | aggregated | all")
      ->required()
      ->check(CLI::IsMember({"laws", "factive", "belief", "aggregated",
                             "all"}));
  check->add_option("--seed", check_seed, "Sampler seed");
  check->add_option("--frames", check_frames, "Gate-passing frames per bound");
  check->add_option("--package", check_package, "Algebra package");

  // govern
  std::string gov_frame, gov_prop, gov_standard = "K", gov_register;
  GovernanceThresholds gov_th;
  CLI::App* govern = app.add_subcommand("govern", "Apply the threshold rule");
  govern->add_option("frame", gov_frame, "Frame JSON file")->required();
  govern->add_option("--prop", gov_prop, "Proposition name");
  govern->add_option("--standard", gov_standard, "Evidence standard");
  govern->add_option("--alpha", gov_th.alpha, "Endorsement threshold");
  govern->add_option("--beta", gov_th.beta, "Monitoring threshold");
  govern->add_option("--eta", gov_th.eta, "Hesitation review threshold");
  govern->add_option("--delta", gov_th.delta, "Audit item threshold");
  govern->add_option("--register", gov_register, "NDJSON event log path");

  // frame-validate
  std::string val_frame, val_package = "godel";
  CLI::App* validate =
      app.add_subcommand("frame-validate", "Validate a frame file");
  validate->add_option("frame", val_frame, "Frame JSON file")->required();
  validate->add_option("--package", val_package, "Algebra package");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed())
      return cmd_eval(eval_frame, eval_formula, eval_world, eval_package);
    if (two_world->parsed())
      return cmd_example_two_world(ex_package, ex_out, tw_a, tw_b, tw_c, tw_d,
                                   tw_x, tw_y);
    if (model_risk->parsed()) return cmd_example_model_risk(mr, ex_out);
    if (flood->parsed())
      return cmd_example_flood(fl, fl_rho_high, fl_rho_low, ex_out);
    if (contagion->parsed()) return cmd_example_contagion();
    if (check->parsed())
      return cmd_check(check_suite, check_package, check_seed, check_frames);
    if (govern->parsed())
      return cmd_govern(gov_frame, gov_prop, gov_standard, gov_th,
                        gov_register);
    if (validate->parsed()) return cmd_frame_validate(val_frame, val_package);
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
