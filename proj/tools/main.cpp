// carnotacf: sub-Laplacian calculus on Carnot groups from the command line.
//
// Exit codes: 0 pass, 1 contradicted/failed, 2 input error, 3 inconclusive,
// 4 numeric failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>

#include <carnotacf/experiments.hpp>
#include <carnotacf/io.hpp>

namespace {

using namespace carnotacf;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitContradicted = 1;
constexpr int kExitInput = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitNumeric = 4;

std::string maybe_file(const std::string& text) {
  if (!text.empty() && text.front() == '@') return read_text_file(text.substr(1));
  return text;
}

CarnotGroup parse_group(const std::string& spec) {
  const std::string text = maybe_file(spec);
  if (!text.empty() && text.front() == '{') return CarnotGroup::from_descriptor_json(text);
  if (text == "heisenberg1") return CarnotGroup::heisenberg1();
  if (text.rfind("euclidean:", 0) == 0) return CarnotGroup::euclidean(std::stoi(text.substr(10)));
  throw std::invalid_argument("group must be heisenberg1, euclidean:N, a JSON descriptor or @file");
}

Polynomial parse_poly_arg(const CarnotGroup& g, const std::string& expr,
                          const std::string& json_text) {
  if (!expr.empty() && !json_text.empty())
    throw std::invalid_argument("give either --poly or --poly-json, not both");
  if (!expr.empty()) return parse_polynomial(expr, g.coord_names(), g.weights());
  if (!json_text.empty())
    return polynomial_from_json_text(maybe_file(json_text), g.dim(), g.weights());
  throw std::invalid_argument("a polynomial is required (--poly or --poly-json)");
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    out.push_back(csv.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<Rational> parse_x0(const CarnotGroup& g, const std::string& csv) {
  std::vector<Rational> out(g.dim(), Rational(0));
  if (csv.empty()) return out;
  const auto toks = split_csv(csv);
  if (static_cast<int>(toks.size()) != g.dim())
    throw std::invalid_argument("--x0 needs one rational per coordinate");
  for (std::size_t i = 0; i < toks.size(); ++i) out[i] = Rational(toks[i]);
  return out;
}

std::vector<double> parse_radii(const std::string& csv) {
  if (csv.empty()) return default_fit_radii();
  std::vector<double> out;
  for (const std::string& tok : split_csv(csv)) out.push_back(std::stod(tok));
  return out;
}

Resolution parse_resolution(const std::string& text, long mc_override, long seed_override) {
  Resolution res;
  if (!text.empty()) res = Resolution::from_json_text(maybe_file(text));
  if (mc_override >= 0) res.mc_samples = mc_override;
  if (seed_override >= 0) res.seed = static_cast<uint64_t>(seed_override);
  return res;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("CARNOTACF_OUT_DIR")) return env;
  return "carnotacf-out";
}

int run_verify_harmonic(const std::string& group_spec, const std::string& expr,
                        const std::string& poly_json) {
  const CarnotGroup g = parse_group(group_spec);
  const Polynomial u = parse_poly_arg(g, expr, poly_json);
  const Polynomial residual = sub_laplacian(g, u);
  if (residual.is_zero()) {
    std::cout << "harmonic: yes\n";
    return kExitPass;
  }
  std::cout << "harmonic: no\nresidual: " << residual.str(g.coord_names()) << "\n";
  return kExitContradicted;
}

int run_scan(const RunConfig& cfg) {
  const CarnotGroup g = CarnotGroup::from_descriptor_json(cfg.group_descriptor);
  if (cfg.poly_expr.empty()) throw std::invalid_argument("scan needs a polynomial");
  const Polynomial u = parse_polynomial(cfg.poly_expr, g.coord_names(), g.weights());
  std::vector<Rational> x0(g.dim(), Rational(0));
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != g.dim())
      throw std::invalid_argument("x0 needs one rational per coordinate");
    for (std::size_t i = 0; i < cfg.x0.size(); ++i) x0[i] = Rational(cfg.x0[i]);
  }
  const std::vector<double> radii = cfg.radii.empty() ? default_fit_radii() : cfg.radii;
  const FunctionalKind kind = functional_kind_from_name(cfg.functional);

  const GaugeGeometry geom = GaugeGeometry::normalized(g, cfg.resolution);
  const RadialScan scan = scan_functional(geom, u, x0, radii, kind, cfg.resolution);
  const MonotonicityReport report = scan_monotonicity(scan);

  const std::string out_dir = cfg.out_dir.empty() ? default_out_dir() : cfg.out_dir;
  ensure_directory(out_dir);
  write_text_file(out_dir + "/scan.csv", scan_to_csv(scan));
  write_text_file(out_dir + "/scan-report.json", report_to_json_text(report));

  // the monotonicity statements concern centers on the free boundary
  std::cout << "functional: " << functional_kind_name(kind) << "\n"
            << "u(x0) = " << format_double(u.eval_exact(x0).convert_to<double>()) << "\n"
            << "classification: " << trend_name(report.classification)
            << "  margin: " << format_double(report.confidence_margin) << "\n"
            << "wrote " << out_dir << "/scan.csv\n";

  if (cfg.expect.empty()) return kExitPass;
  if (report.classification == MonotonicityReport::Trend::inconclusive) return kExitInconclusive;
  const bool want_up = cfg.expect == "increasing";
  const bool got_up = report.classification == MonotonicityReport::Trend::increasing;
  const bool got_down = report.classification == MonotonicityReport::Trend::decreasing;
  return ((want_up && got_up) || (!want_up && got_down)) ? kExitPass : kExitContradicted;
}

int run_mean_value(const std::string& group_spec, const std::string& expr,
                   const std::string& poly_json, const std::string& x0_csv,
                   const std::string& radii_csv, const std::string& res_text, long mc, long seed,
                   const std::string& out) {
  const CarnotGroup g = parse_group(group_spec);
  const Polynomial u = parse_poly_arg(g, expr, poly_json);
  const std::vector<Rational> x0 = parse_x0(g, x0_csv);
  const Resolution res = parse_resolution(res_text, mc, seed);
  const GaugeGeometry geom = GaugeGeometry::normalized(g, res);

  const RadialScan scan =
      scan_functional(geom, u, x0, parse_radii(radii_csv), FunctionalKind::mean_value, res);
  for (std::size_t i = 0; i < scan.radii.size(); ++i)
    std::cout << "r = " << format_double(scan.radii[i])
              << "  M_r = " << format_double(scan.values[i]) << "  +- "
              << format_double(scan.errors[i]) << "\n";
  if (!out.empty()) {
    ensure_directory(out);
    write_text_file(out + "/mean-value.csv", scan_to_csv(scan));
  }
  return kExitPass;
}

int run_fit_quartic(const std::string& c1, const std::string& c2, const std::string& radii_csv,
                    const std::string& res_text, long mc, long seed, const std::string& out) {
  const Resolution res = parse_resolution(res_text, mc, seed);
  const GaugeGeometry geom = GaugeGeometry::normalized(CarnotGroup::heisenberg1(), res);
  const QuarticProfile prof =
      quartic_profile(geom, Rational(c1), Rational(c2), parse_radii(radii_csv), res);

  json j;
  j["fit"] = {{"a0", prof.fit.a0},
              {"a1", prof.fit.a1},
              {"a2", prof.fit.a2},
              {"a0_sigma", prof.fit.a0_sigma},
              {"a1_sigma", prof.fit.a1_sigma},
              {"a2_sigma", prof.fit.a2_sigma},
              {"residual_rms", prof.fit.residual_rms},
              {"condition", prof.fit.condition}};
  j["direct"] = {{"a0", json::parse(prof.direct_a0.to_json_text())},
                 {"a1", json::parse(prof.direct_a1.to_json_text())},
                 {"a2", json::parse(prof.direct_a2.to_json_text())}};
  std::cout << j.dump(2) << "\n";

  const std::string out_dir = out.empty() ? default_out_dir() : out;
  ensure_directory(out_dir);
  write_text_file(out_dir + "/quartic-scan.csv", scan_to_csv(prof.scan));
  write_text_file(out_dir + "/quartic-fit.json", j.dump(2));
  return kExitPass;
}

int run_gauge_info(const std::string& group_spec, const std::string& res_text, long mc,
                   long seed) {
  const CarnotGroup g = parse_group(group_spec);
  const Resolution res = parse_resolution(res_text, mc, seed);
  json j;
  j["descriptor"] = json::parse(g.descriptor_json());
  j["dim"] = g.dim();
  j["step"] = g.step();
  j["homogeneous_dim"] = g.homogeneous_dim();
  j["weights"] = g.weights();
  j["layer_dims"] = g.layer_dims();
  json fields = json::array();
  for (const auto& f : g.horizontal_fields()) {
    json fj;
    fj["leading_coord"] = g.coord_names().at(f.index());
    json coeffs = json::object();
    for (const auto& [k, p] : f.coeffs()) coeffs[g.coord_names().at(k)] = p.str(g.coord_names());
    fj["coeffs"] = coeffs;
    fields.push_back(fj);
  }
  j["horizontal_fields"] = fields;
  if (g.has_gauge()) {
    j["gamma_constant"] = fix_gamma_constant(g, res);
    j["normalization"] = "unit kernel mass on the unit gauge sphere";
    j["normalization_scheme"] = json::parse(res.to_json_text());
  } else {
    j["gamma_constant"] = nullptr;
    j["normalization"] = "no closed-form fundamental solution for this group";
  }
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int run_reproduce(const std::string& out, const std::string& res_text, long mc, long seed,
                  double debug_cq_scale) {
  ReproduceOptions opt;
  opt.res = parse_resolution(res_text, mc, seed);
  opt.out_dir = out.empty() ? default_out_dir() + "/reproduction" : out;
  opt.debug_cq_scale = debug_cq_scale;

  const std::vector<ClaimResult> claims = run_reproduction(opt);
  bool all_pass = true;
  for (const ClaimResult& c : claims) {
    const bool ok = c.status == "pass";
    all_pass = all_pass && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << c.claim_id << " - " << c.anchor << "\n";
  }
  std::cout << (all_pass ? "all claims pass" : "claim failures present") << "; report at "
            << opt.out_dir << "/claims.json\n";
  return all_pass ? kExitPass : kExitContradicted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-Laplacian calculus on Carnot groups: gauge quadrature, intrinsic means and "
               "monotonicity experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string group = "heisenberg1", poly, poly_json, x0, radii, res_text, expect, out, config;
  std::string functional = "j_tilde";
  std::string c1 = "1", c2 = "0";
  long mc = -1, seed = -1;
  double debug_cq = 1.0;

  auto add_common = [&](CLI::App* cmd, bool with_poly) {
    cmd->add_option("--group", group, "heisenberg1 | euclidean:N | JSON descriptor | @file");
    if (with_poly) {
      cmd->add_option("--poly", poly, "polynomial expression, e.g. \"x - 3*y*t - 2*x^3\"");
      cmd->add_option("--poly-json", poly_json, "term list JSON or @file");
    }
    cmd->add_option("--resolution", res_text, "resolution JSON or @file");
    cmd->add_option("--mc-samples", mc, "override resolution.mc_samples");
    cmd->add_option("--seed", seed, "override resolution.seed");
  };

  CLI::App* vh = app.add_subcommand("verify-harmonic", "exact sub-Laplacian harmonicity check");
  add_common(vh, true);

  CLI::App* sc = app.add_subcommand("scan", "radial scan of a functional with trend report");
  add_common(sc, true);
  sc->add_option("--config", config, "RunConfig JSON file (flags override)");
  sc->add_option("--x0", x0, "center, comma-separated rationals");
  sc->add_option("--radii", radii, "comma-separated radii (default 0.05..0.5)");
  sc->add_option("--functional", functional, "j | j_tilde | mean_value | j_repr");
  sc->add_option("--expect", expect, "increasing | decreasing");
  sc->add_option("--out", out, "output directory");

  CLI::App* mv = app.add_subcommand("mean-value", "intrinsic mean values on gauge spheres");
  add_common(mv, true);
  mv->add_option("--x0", x0, "center, comma-separated rationals");
  mv->add_option("--radii", radii, "comma-separated radii");
  mv->add_option("--out", out, "output directory");

  CLI::App* fq = app.add_subcommand("fit-quartic", "quartic profile of a family member");
  add_common(fq, false);
  fq->add_option("--c1", c1, "family coefficient c1 (rational)");
  fq->add_option("--c2", c2, "family coefficient c2 (rational)");
  fq->add_option("--radii", radii, "comma-separated radii in (0,1]");
  fq->add_option("--out", out, "output directory");

  CLI::App* gi = app.add_subcommand("gauge-info", "group descriptor and gauge constants");
  add_common(gi, false);

  CLI::App* rp = app.add_subcommand("reproduce-paper", "run the full claim suite");
  add_common(rp, false);
  rp->add_option("--out", out, "output directory for reports");
  rp->add_option("--debug-cq-scale", debug_cq,
                 "corrupt the kernel constant (sensitivity check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  }

  try {
    if (vh->parsed()) return run_verify_harmonic(group, poly, poly_json);
    if (sc->parsed()) {
      RunConfig cfg;
      if (!config.empty()) cfg = RunConfig::from_json_text(read_text_file(config));
      if (sc->count("--group") || config.empty())
        cfg.group_descriptor = parse_group(group).descriptor_json();
      if (!poly.empty()) cfg.poly_expr = poly;
      if (!x0.empty()) {
        cfg.x0.clear();
        const CarnotGroup g = CarnotGroup::from_descriptor_json(cfg.group_descriptor);
        for (const Rational& c : parse_x0(g, x0)) cfg.x0.push_back(c.str());
      }
      if (!radii.empty()) cfg.radii = parse_radii(radii);
      if (!res_text.empty() || mc >= 0 || seed >= 0)
        cfg.resolution = parse_resolution(res_text, mc, seed);
      if (sc->count("--functional")) cfg.functional = functional;
      if (!expect.empty()) cfg.expect = expect;
      if (!out.empty()) cfg.out_dir = out;
      return run_scan(cfg);
    }
    if (mv->parsed())
      return run_mean_value(group, poly, poly_json, x0, radii, res_text, mc, seed, out);
    if (fq->parsed()) return run_fit_quartic(c1, c2, radii, res_text, mc, seed, out);
    if (gi->parsed()) return run_gauge_info(group, res_text, mc, seed);
    if (rp->parsed()) return run_reproduce(out, res_text, mc, seed, debug_cq);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
