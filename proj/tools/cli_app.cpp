#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anglelab/asymptotics.hpp"
#include "anglelab/body_spec.hpp"
#include "anglelab/elongation.hpp"
#include "anglelab/errors.hpp"
#include "anglelab/geometry.hpp"
#include "anglelab/limits.hpp"
#include "anglelab/parallel.hpp"
#include "anglelab/serialization.hpp"
#include "anglelab/specfun.hpp"

namespace anglelab::cli {

namespace {

using nlohmann::ordered_json;

struct Common {
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
  std::string out_path;
  std::string format = "json";
};

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> v;
  std::string item;
  std::istringstream in(text);
  auto take = [&](const std::string& s) {
    if (s.empty()) return;
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": '" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(x))
      throw ValidationError(std::string(what) + ": '" + s + "' is not a number");
    v.push_back(x);
  };
  for (char ch : text) {
    if (ch == ',' || ch == ';' || ch == ' ') {
      take(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  take(item);
  if (v.empty()) throw ValidationError(std::string(what) + ": empty list");
  return v;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> out;
  for (double x : parse_reals(text, "--dlist")) {
    if (x != std::floor(x) || x < 2 || x > 500)
      throw ValidationError("--dlist: entries must be integers in [2, 500]");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

ordered_json estimate_json(const ElongationEstimate& e) {
  return {{"value", e.value},
          {"log_value", e.log_value},
          {"method", std::string(to_string(e.method))},
          {"stderr", e.std_error},
          {"samples", e.samples}};
}

void write_file(const Common& c, const std::string& json_text, const std::string& csv_text) {
  if (c.out_path.empty()) return;
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + c.out_path + " for writing");
  if (c.format == "csv") {
    if (csv_text.empty()) throw ValidationError("this subcommand has no csv form");
    f << csv_text;
  } else {
    f << json_text << '\n';
  }
  if (!f) throw std::runtime_error("failed writing " + c.out_path);
}

std::string rows_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ostringstream s;
  for (std::size_t i = 0; i < header.size(); ++i) s << (i ? "," : "") << header[i];
  s << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << ordered_json(r[i]).dump();
    s << '\n';
  }
  return s.str();
}

BodyPtr body_from(const std::string& text) {
  if (text.empty()) throw ValidationError("--body is required");
  return parse_body(text);
}

Point unit_from(const std::string& text, int d) {
  Point u = parse_reals(text, "--u");
  if (static_cast<int>(u.size()) != d)
    throw ValidationError("--u has " + std::to_string(u.size()) + " components, body has d=" +
                          std::to_string(d));
  return u;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal angles among random points in convex bodies", "anglelab"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "master seed")->capture_default_str();
  app.add_option("--workers", common.workers,
                 std::string("worker threads, 0 = auto ($") + kWorkersEnv + ")")
      ->capture_default_str();
  app.add_option("--out", common.out_path, "also write the result to this file");
  app.add_option("--format", common.format, "file format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::function<ordered_json()> action;
  std::string file_csv;

  // rho
  int rho_d = 2;
  auto* rho_cmd = app.add_subcommand("rho", "the constant rho_d");
  rho_cmd->add_option("--d", rho_d)->required()->check(CLI::Range(2, 100000));
  rho_cmd->callback([&] {
    action = [&] {
      return ordered_json{{"d", rho_d}, {"rho", rho(rho_d)}, {"log_rho", log_rho(rho_d)}};
    };
  });

  // elongation
  std::string body_text, method_text = "auto";
  std::uint64_t samples = 1'000'000;
  auto* elong_cmd = app.add_subcommand("elongation", "lambda_d(K)");
  elong_cmd->add_option("--body", body_text)->required();
  elong_cmd->add_option("--method", method_text, "auto|analytic|quadrature|monte-carlo")
      ->capture_default_str();
  elong_cmd->add_option("--samples", samples)->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 40))
      ->capture_default_str();
  elong_cmd->callback([&] {
    action = [&] {
      const auto body = body_from(body_text);
      const auto method = method_text == "auto" ? default_method(*body) : parse_method(method_text);
      RandomStream stream(common.seed);
      const auto lam = elongation(*body, method, samples, stream, common.workers);
      return ordered_json{{"spec", to_string(body->spec())},
                          {"d", body->dim()},
                          {"seed", common.seed},
                          {"lambda", estimate_json(lam)}};
    };
  });

  // maxangle
  std::size_t n = 200;
  std::string scan = "pruned";
  auto* max_cmd = app.add_subcommand("maxangle", "largest angle among n uniform points");
  max_cmd->add_option("--body", body_text)->required();
  max_cmd->add_option("--n", n)->check(CLI::Range(std::size_t{3}, std::size_t{1} << 24))
      ->capture_default_str();
  max_cmd->add_option("--scan", scan)->check(CLI::IsMember({"pruned", "brute"}))->capture_default_str();
  max_cmd->callback([&] {
    action = [&] {
      const auto body = body_from(body_text);
      RandomStream stream(common.seed);
      const auto cloud = sample(*body, stream, n);
      const auto r = scan == "brute" ? max_angle_bruteforce(cloud) : max_angle_pruned(cloud);
      return ordered_json{{"spec", cloud.body},
                          {"n", r.n},
                          {"seed", common.seed},
                          {"phi", r.phi},
                          {"gap", r.gap},
                          {"triple", {r.triple[0], r.triple[1], r.triple[2]}},
                          {"evaluations", r.evaluations}};
    };
  });

  // converge
  std::size_t trials = 1000;
  auto* conv_cmd = app.add_subcommand("converge", "ensemble of Y = lambda n^3/6 (pi - phi)^(d-1)");
  conv_cmd->add_option("--body", body_text)->required();
  conv_cmd->add_option("--n", n)->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20))
      ->capture_default_str();
  conv_cmd->add_option("--trials", trials)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
      ->capture_default_str();
  conv_cmd->callback([&] {
    action = [&] {
      const auto body = body_from(body_text);
      RandomStream lambda_stream(substream_seed(common.seed, 0x6c616d626461ULL));
      const auto lam = default_lambda(*body, lambda_stream, common.workers);
      const auto ens = run_trials(*body, n, trials, lam, common.seed, common.workers);
      if (ens.trials >= 100) file_csv = ecdf_csv(gof_report(ens));
      return ensemble_to_json(ens);
    };
  });

  // tail-ratio
  std::string eps_text = "0.2,0.1,0.05,0.02";
  std::uint64_t triples = 10'000'000;
  auto* tail_cmd = app.add_subcommand("tail-ratio", "P(largest angle > pi - eps) / (lambda eps^(d-1))");
  tail_cmd->add_option("--body", body_text)->required();
  tail_cmd->add_option("--eps", eps_text)->capture_default_str();
  tail_cmd->add_option("--triples", triples)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40))
      ->capture_default_str();
  tail_cmd->callback([&] {
    action = [&] {
      const auto body = body_from(body_text);
      const auto eps = parse_reals(eps_text, "--eps");
      for (double e : eps)
        if (!(e > 0.0 && e < 0.5 * std::numbers::pi))
          throw ValidationError("--eps: entries must lie in (0, pi/2)");
      RandomStream lambda_stream(substream_seed(common.seed, 0x6c616d626461ULL));
      const auto lam = default_lambda(*body, lambda_stream, common.workers);
      RandomStream stream(common.seed);
      const auto rows = tail_ratio(*body, lam, eps, triples, stream, common.workers);
      ordered_json j{{"spec", to_string(body->spec())},
                     {"seed", common.seed},
                     {"lambda", estimate_json(lam)},
                     {"rows", ordered_json::array()}};
      std::vector<std::vector<double>> csv;
      for (const auto& r : rows) {
        j["rows"].push_back({{"epsilon", r.epsilon},
                             {"triples", r.triples},
                             {"probability", r.probability},
                             {"ratio", r.ratio},
                             {"stderr", r.std_error},
                             {"fixed_apex_times3", r.fixed_apex_times3},
                             {"identity_mean", r.identity_mean},
                             {"identity_stderr", r.identity_std_error}});
        csv.push_back({r.epsilon, r.probability, r.ratio, r.std_error, r.fixed_apex_times3,
                       r.identity_mean, r.identity_std_error});
      }
      file_csv = rows_csv({"epsilon", "P(largest angle > pi-eps)", "P/(lambda eps^(d-1))",
                           "stderr(ratio)", "3P(angle at P3 > pi-eps)", "mean(1{any}-3*1{P3})",
                           "stderr(identity)"},
                          csv);
      return j;
    };
  });

  // lens
  int lens_d = 2;
  double lens_eps = 0.1, lens_ell = 2.0;
  auto* lens_cmd = app.add_subcommand("lens", "volume of the lens seeing a segment under > pi - eps");
  lens_cmd->add_option("--d", lens_d)->required()->check(CLI::Range(2, 10000));
  lens_cmd->add_option("--eps", lens_eps)->required();
  lens_cmd->add_option("--ell", lens_ell)->capture_default_str()->check(CLI::PositiveNumber);
  lens_cmd->callback([&] {
    action = [&] {
      if (!(lens_eps > 0.0 && lens_eps < 0.5 * std::numbers::pi))
        throw ValidationError("--eps must lie in (0, pi/2)");
      Point x(lens_d, 0.0), y(lens_d, 0.0);
      y[0] = lens_ell;
      const LensQuery q{x, y, lens_eps};
      const double v = lens_volume_exact(q), lead = lens_volume_leading(q);
      return ordered_json{{"d", lens_d}, {"eps", lens_eps}, {"ell", lens_ell},
                          {"volume", v}, {"leading", lead}, {"ratio", v / lead}};
    };
  });

  // steiner
  std::string u_text;
  bool check = false;
  std::uint64_t steiner_samples = 200'000;
  auto* st_cmd = app.add_subcommand("steiner", "Steiner symmetrization S_u K");
  st_cmd->add_option("--body", body_text)->required();
  st_cmd->add_option("--u", u_text)->required();
  st_cmd->add_flag("--check", check, "coupled estimate of E_d(K) - E_d(S_u K) and volumes");
  st_cmd->add_option("--samples", steiner_samples)
      ->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 40))
      ->capture_default_str();
  st_cmd->callback([&] {
    action = [&] {
      const auto body = body_from(body_text);
      const Point u = unit_from(u_text, body->dim());
      const auto sym = steiner_symmetrize(body, u);
      ordered_json j{{"spec", to_string(body->spec())},
                     {"u", u},
                     {"seed", common.seed},
                     {"symmetrized", to_string(sym->spec())}};
      if (!check) return j;
      RandomStream stream(common.seed);
      auto volume_json = [&](const ConvexBody& b) {
        const auto mc = estimate_volume(b, stream, steiner_samples);
        ordered_json v{{"mc", mc.value}, {"mc_stderr", mc.std_error}};
        v["exact"] = b.volume() ? ordered_json(*b.volume()) : ordered_json(nullptr);
        return v;
      };
      j["volume_original"] = volume_json(*body);
      j["volume_symmetrized"] = volume_json(*sym);
      const auto c = coupled_steiner_estimator(*body, u, steiner_samples, stream, common.workers,
                                               false);
      j["coupling"] = {{"samples", steiner_samples},
                       {"E_original", c.original.value},
                       {"E_original_stderr", c.original.std_error},
                       {"E_symmetrized", c.symmetrized.value},
                       {"E_symmetrized_stderr", c.symmetrized.std_error},
                       {"mean_difference", c.mean_difference},
                       {"difference_stderr", c.difference_std_error},
                       {"min_relative_difference", c.min_relative_difference},
                       {"violations", c.violations},
                       {"max_abs_c", c.max_abs_c}};
      return j;
    };
  });

  // asym
  std::string dlist_text = "25,50,100,200";
  auto* asym_cmd = app.add_subcommand("asym", "ball moments and elongation against leading order");
  asym_cmd->add_option("--dlist", dlist_text)->capture_default_str();
  asym_cmd->callback([&] {
    action = [&] {
      const auto ds = parse_dims(dlist_text);
      const auto s = saddle_analysis();
      const auto rows = ball_asymptotics_table(ds, common.workers);
      ordered_json j{{"saddle",
                      {{"t_star", s.t_star},
                       {"psi_at_star", s.psi_at_star},
                       {"exp_psi_at_star", s.exp_psi_at_star},
                       {"psi2_at_star", s.psi2_at_star}}},
                     {"rows", ordered_json::array()}};
      for (const auto& r : rows) {
        ordered_json row{{"d", r.d},
                         {"log_E", r.log_E},
                         {"log_E_leading", r.log_E_leading},
                         {"log_lambda", r.log_lambda},
                         {"log_lambda_leading", r.log_lambda_leading},
                         {"rel_error_E", r.rel_error_E},
                         {"rel_error_lambda", r.rel_error_lambda}};
        if (r.d >= 3) {
          row["log_Q"] = log_q_d_exact(r.d);
          row["log_Q_laplace"] = log_q_d_laplace(r.d);
        }
        j["rows"].push_back(std::move(row));
      }
      file_csv = asymptotics_csv(rows);
      return j;
    };
  });

  // corollary
  auto* cor_cmd = app.add_subcommand("corollary", "(6 / lambda_d(B))^(1/(d-1)) against 3 sqrt(3)/2");
  cor_cmd->add_option("--dlist", dlist_text)->capture_default_str();
  cor_cmd->callback([&] {
    action = [&] {
      const auto rows = corollary_limit(parse_dims(dlist_text), common.workers);
      ordered_json j{{"limit", kCorollaryLimit}, {"rows", ordered_json::array()}};
      for (const auto& r : rows)
        j["rows"].push_back({{"d", r.d},
                             {"log_lambda", r.log_lambda},
                             {"value", r.value},
                             {"rel_deviation", r.rel_deviation}});
      file_csv = corollary_csv(rows);
      return j;
    };
  });

  // conjecture
  std::string cgrid_text;
  auto* conj_cmd = app.add_subcommand("conjecture", "exceedance curves of phi for K and S_u K");
  conj_cmd->add_option("--body", body_text)->required();
  conj_cmd->add_option("--u", u_text)->required();
  conj_cmd->add_option("--n", n)->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20))
      ->capture_default_str();
  conj_cmd->add_option("--trials", trials)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
      ->capture_default_str();
  conj_cmd->add_option("--cgrid", cgrid_text, "angle thresholds; default from observed gaps");
  conj_cmd->callback([&] {
    action = [&] {
      const auto body = body_from(body_text);
      const Point u = unit_from(u_text, body->dim());
      std::vector<double> grid;
      if (!cgrid_text.empty()) grid = parse_reals(cgrid_text, "--cgrid");
      const auto r = conjecture_probe(body, u, n, trials, grid, common.seed, common.workers);
      ordered_json j{{"spec", r.original_spec},
                     {"symmetrized", r.symmetrized_spec},
                     {"n", n},
                     {"trials", trials},
                     {"seed", common.seed},
                     {"flagged", r.flagged},
                     {"rows", ordered_json::array()}};
      std::vector<std::vector<double>> csv;
      for (const auto& row : r.rows) {
        j["rows"].push_back({{"c", row.c},
                             {"original", row.original.estimate},
                             {"original_lo", row.original.lo},
                             {"original_hi", row.original.hi},
                             {"symmetrized", row.symmetrized.estimate},
                             {"symmetrized_lo", row.symmetrized.lo},
                             {"symmetrized_hi", row.symmetrized.hi},
                             {"flagged", row.flagged}});
        csv.push_back({row.c, row.original.estimate, row.original.lo, row.original.hi,
                       row.symmetrized.estimate, row.symmetrized.lo, row.symmetrized.hi,
                       row.flagged ? 1.0 : 0.0});
      }
      file_csv = rows_csv({"c", "P(phi_K > c)", "lo", "hi", "P(phi_SuK > c)", "lo", "hi",
                           "flagged"},
                          csv);
      return j;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const ordered_json result = action();
    const std::string text = result.dump();
    write_file(common, text, file_csv);
    out << text << '\n';
    return 0;
  } catch (const DuplicatePointError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace anglelab::cli
