#include "flagblocks/cli.hpp"

#include <chrono>
#include <fstream>

#include "CLI11.hpp"

#include "flagblocks/acceptance.hpp"
#include "flagblocks/combinatorics.hpp"
#include "flagblocks/conformal.hpp"
#include "flagblocks/currents.hpp"
#include "flagblocks/hypergeom.hpp"
#include "flagblocks/localization.hpp"
#include "flagblocks/records.hpp"

namespace flagblocks::cli {

using combi::ColoringMap;
using combi::WeightComposition;
using symalg::Rat;
using symalg::RatExpr;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<double> parse_csv_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

double parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

ColoringMap parse_coloring(const std::string& csv) {
  ColoringMap w;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) w.colors.push_back(std::stoi(tok));
  return w;
}

struct GlobalOpts {
  std::uint64_t seed = 0;
  unsigned trials = 3;
  double tolerance = 1e-10;
  int nodes = 32;
};

int emit_record(std::ostream& out, VerificationRecord rec, double t0) {
  rec.wall_ms = now_ms() - t0;
  out << rec.to_json().dump() << "\n";
  return rec.pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact localization data on flag varieties, canonical conformal-block "
               "sections, Selberg-type integrals, and their verification suites"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for all randomized checks")->envname("FLAGBLOCKS_SEED");
  app.add_option("--trials", g.trials, "evaluation points per identity test")
      ->envname("FLAGBLOCKS_TRIALS");
  app.add_option("--tolerance", g.tolerance, "numeric tolerance for quadrature refinement")
      ->envname("FLAGBLOCKS_TOLERANCE");
  app.add_option("--nodes", g.nodes, "quadrature nodes per level")->envname("FLAGBLOCKS_NODES");

  // ---- combi ----
  auto* combi_cmd = app.add_subcommand("combi", "weight compositions, colorings, multinomials");
  std::string combi_lambda;
  auto* colorings_cmd = combi_cmd->add_subcommand("colorings", "list the colorings of lambda");
  colorings_cmd->add_option("--lambda", combi_lambda, "weight composition a,b,c")->required();
  auto* qmult_cmd = combi_cmd->add_subcommand("qmultinomial", "Gaussian multinomial coefficients");
  qmult_cmd->add_option("--lambda", combi_lambda, "weight composition a,b,c")->required();

  // ---- loc ----
  auto* loc_cmd = app.add_subcommand("loc", "fixed-point localization data");
  std::string loc_lambda, loc_point;
  auto* euler_cmd = loc_cmd->add_subcommand("euler", "tangent Euler class at a fixed point");
  euler_cmd->add_option("--lambda", loc_lambda)->required();
  euler_cmd->add_option("--point", loc_point, "coloring of the fixed point, e.g. 1,1,2")
      ->required();
  auto* delta_cmd = loc_cmd->add_subcommand("check-delta", "restriction delta property");
  delta_cmd->add_option("--lambda", loc_lambda)->required();

  // ---- cb ----
  auto* cb_cmd = app.add_subcommand("cb", "canonical-section verifications");
  auto* cb_verify = cb_cmd->add_subcommand("verify", "run one verification");
  std::string cb_theorem, cb_lambda;
  cb_verify->add_option("--theorem", cb_theorem, "2.5 | 2.6a | 2.6b | 2.6c")->required();
  cb_verify->add_option("--lambda", cb_lambda)->required();

  // ---- selberg ----
  auto* sel_cmd = app.add_subcommand("selberg", "numeric Selberg integrals over the cell");
  int sel_m = 2;
  std::string sel_kappa = "-2", sel_z = "0,1", sel_levels = "auto", sel_cfg_file, sel_lambda;
  sel_cmd->add_option("--m", sel_m, "flag case: lambda = (1,...,1) with m parts");
  sel_cmd->add_option("--lambda", sel_lambda, "level-one shape (overrides --m)");
  sel_cmd->add_option("--kappa", sel_kappa, "coupling, rational like -2 or -5/2");
  sel_cmd->add_option("--z", sel_z, "anchor points, increasing csv");
  sel_cmd->add_option("--levels", sel_levels, "refinement passes: auto or a count");
  sel_cmd->add_option("--config", sel_cfg_file,
                      "quadrature config JSON {nodes, refinements, rel_tol}");

  // ---- currents ----
  auto* cur_cmd = app.add_subcommand("currents", "geometric current action verification");
  auto* cur_verify = cur_cmd->add_subcommand("verify", "transferred action and bracket closure");
  int cur_m = 2, cur_N = 2, cur_jmax = 1;
  cur_verify->add_option("--m", cur_m)->required();
  cur_verify->add_option("--N", cur_N)->required();
  cur_verify->add_option("--jmax", cur_jmax);

  // ---- suite ----
  auto* suite_cmd = app.add_subcommand("suite", "acceptance battery");
  std::string profile = "desk";
  suite_cmd->add_option("--profile", profile, "smoke | desk | extended")
      ->envname("FLAGBLOCKS_PROFILE");

  // global flags may follow a subcommand
  auto enable_fallthrough = [](auto&& self, CLI::App* a) -> void {
    a->fallthrough();
    for (CLI::App* sub : a->get_subcommands({})) self(self, sub);
  };
  enable_fallthrough(enable_fallthrough, &app);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const double t0 = now_ms();
  try {
    if (colorings_cmd->parsed()) {
      WeightComposition lam = WeightComposition::parse(combi_lambda);
      Json arr = Json::array();
      for (const auto& w : combi::enumerate_colorings(lam)) {
        Json jw = Json::array();
        for (int c : w.colors) jw.push_back(c);
        arr.push_back(std::move(jw));
      }
      Json j;
      j["lambda"] = lam.str();
      j["count"] = arr.size();
      j["colorings"] = std::move(arr);
      out << j.dump() << "\n";
      return 0;
    }
    if (qmult_cmd->parsed()) {
      WeightComposition lam = WeightComposition::parse(combi_lambda);
      Json j;
      j["lambda"] = lam.str();
      Json coeffs = Json::array();
      for (const auto& c : combi::q_multinomial(lam)) coeffs.push_back(c.get_str());
      j["coefficients"] = std::move(coeffs);
      j["degree"] = lam.dimension();
      out << j.dump() << "\n";
      return 0;
    }
    if (euler_cmd->parsed()) {
      WeightComposition lam = WeightComposition::parse(loc_lambda);
      ColoringMap w = parse_coloring(loc_point);
      if (!w.matches(lam)) {
        err << "usage error: point does not color lambda\n";
        return 2;
      }
      Json j;
      j["lambda"] = lam.str();
      j["point"] = loc_point;
      j["euler_class"] = Json::parse(loc::euler_class(w).to_json());
      out << j.dump() << "\n";
      return 0;
    }
    if (delta_cmd->parsed()) {
      WeightComposition lam = WeightComposition::parse(loc_lambda);
      VerificationRecord rec;
      rec.claim = "restrictions of the y'-classes are diagonal with Euler-class values";
      rec.params["lambda"] = lam.str();
      rec.seed = g.seed;
      rec.pass = true;
      auto pts = combi::enumerate_colorings(lam);
      for (const auto& wp : pts) {
        for (const auto& w : pts) {
          RatExpr got = loc::restrict_at(loc::y_prime_class(lam, wp), w);
          RatExpr want = (w == wp) ? loc::euler_class(w) : RatExpr::zero();
          if (!(got - want).structurally_zero()) {
            rec.pass = false;
            rec.witness = Json::object();
            rec.witness["pair"] = wp.str() + " / " + w.str();
          }
        }
      }
      rec.detail["pairs"] = pts.size() * pts.size();
      rec.detail["mode"] = "exact";
      return emit_record(out, std::move(rec), t0);
    }
    if (cb_verify->parsed()) {
      WeightComposition lam = WeightComposition::parse(cb_lambda);
      VerificationRecord rec;
      if (cb_theorem == "2.5") {
        rec = cb::check_p_equals_rv(lam, g.trials, g.seed);
      } else if (cb_theorem == "2.6a") {
        rec = cb::singular_check(cb::canonical_p(lam), g.trials, g.seed);
      } else if (cb_theorem == "2.6b") {
        rec = cb::e_z_nilpotency_check(cb::canonical_p(lam), lam, g.trials, g.seed);
      } else if (cb_theorem == "2.6c") {
        rec = cb::check_kz_canonical(lam, g.trials, g.seed);
      } else {
        err << "usage error: unknown theorem tag " << cb_theorem << "\n";
        return 2;
      }
      return emit_record(out, std::move(rec), t0);
    }
    if (sel_cmd->parsed()) {
      hg::QuadConfig cfg;
      cfg.nodes = g.nodes;
      cfg.rel_tol = g.tolerance;
      if (sel_levels != "auto") cfg.refinements = std::stoi(sel_levels);
      if (!sel_cfg_file.empty()) {
        std::ifstream in(sel_cfg_file);
        if (!in) {
          err << "usage error: cannot read config file " << sel_cfg_file << "\n";
          return 2;
        }
        Json jc = Json::parse(in);
        if (jc.contains("nodes")) cfg.nodes = jc["nodes"].get<int>();
        if (jc.contains("refinements")) cfg.refinements = jc["refinements"].get<int>();
        if (jc.contains("rel_tol")) cfg.rel_tol = jc["rel_tol"].get<double>();
      }
      const double kappa = parse_rational(sel_kappa);
      const std::vector<double> z = parse_csv_doubles(sel_z);

      hg::SelbergResult res;
      Json j;
      if (!sel_lambda.empty()) {
        WeightComposition lam = WeightComposition::parse(sel_lambda);
        res = hg::level1_selberg_numeric(lam, z, kappa, cfg);
        j["lambda"] = lam.str();
        j["reference_constant"] = hg::level1_constant(lam);
        hg::KZResidualReport rep = hg::level1_kz_residual(lam, z, kappa, cfg, 1e-4);
        Json jr;
        jr["step"] = rep.step;
        jr["node_counts"] = rep.node_counts;
        jr["residuals"] = rep.residuals;
        j["kz_residual_report"] = std::move(jr);
      } else {
        res = hg::selberg_numeric(sel_m, z, kappa, cfg);
        hg::GammaConstant c = hg::c_m_constant(sel_m, kappa);
        double psi_z = 1.0;
        for (std::size_t i = 0; i < z.size(); ++i)
          for (std::size_t k = i + 1; k < z.size(); ++k)
            psi_z *= std::pow(z[k] - z[i], -2.0 / kappa);
        j["m"] = sel_m;
        j["reference_constant"] = c.value_normalized * psi_z;
        j["reference_constant_literal_formula"] = c.value * psi_z;
        j["constant_expression"] = c.expression;
        // per-component ratio to the reference, sign included
        Json ratios = Json::array();
        for (std::size_t k = 0; k < res.components.size(); ++k) {
          int sgn = 1;
          const auto& w = res.index[k];
          for (int x = 0; x < w.N(); ++x)
            for (int y = x + 1; y < w.N(); ++y)
              if (w.colors[x] > w.colors[y]) sgn = -sgn;
          ratios.push_back(res.components[k] / (c.value_normalized * psi_z * sgn));
        }
        j["ratio"] = std::move(ratios);
      }
      j["kappa"] = kappa;
      Json comps = Json::array(), errs = Json::array(), idx = Json::array();
      for (std::size_t k = 0; k < res.components.size(); ++k) {
        comps.push_back(res.components[k]);
        errs.push_back(res.error_estimates[k]);
        idx.push_back(res.index[k].str());
      }
      j["component_index"] = std::move(idx);
      j["components"] = std::move(comps);
      j["error_estimates"] = std::move(errs);
      j["node_counts"] = res.node_counts;
      j["notes"] = res.notes;
      j["wall_ms"] = now_ms() - t0;
      out << j.dump() << "\n";
      return 0;
    }
    if (cur_verify->parsed()) {
      VerificationRecord rec = cur::verify_current_action(cur_m, cur_N, cur_jmax, g.trials, g.seed);
      return emit_record(out, std::move(rec), t0);
    }
    if (suite_cmd->parsed()) {
      auto results = acceptance::run_acceptance(profile, g.seed);
      Json j;
      j["profile"] = profile;
      j["seed"] = g.seed;
      j["criteria"] = acceptance::results_json(results);
      j["result"] = acceptance::all_pass(results) ? "pass" : "fail";
      j["wall_ms"] = now_ms() - t0;
      out << j.dump() << "\n";
      return acceptance::all_pass(results) ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no action\n";
  return 2;
}

}  // namespace flagblocks::cli
