#include "anglelab/serialization.hpp"

#include <cmath>
#include <sstream>

#include "anglelab/errors.hpp"
#include "format.hpp"

namespace anglelab {

using nlohmann::ordered_json;

ordered_json ensemble_to_json(const TrialEnsemble& e) {
  ordered_json j;
  j["spec"] = e.spec;
  j["d"] = e.d;
  j["n"] = e.n;
  j["trials"] = e.trials;
  j["lambda"] = {{"value", e.lambda.value},
                 {"method", std::string(to_string(e.lambda.method))},
                 {"stderr", e.lambda.std_error}};
  j["seed"] = e.master_seed;
  j["y_values"] = e.y_values;
  j["gaps"] = e.gaps;
  j["ks"] = ks_distance_exp1(e.y_values);
  ordered_json tail = ordered_json::array();
  if (e.y_values.size() >= 100)
    for (const auto& row : gof_report(e).tail)
      tail.push_back({{"c", row.c},
                      {"empirical", row.empirical},
                      {"theoretical", row.theoretical},
                      {"stderr", row.std_error}});
  j["tail"] = std::move(tail);
  j["resampled"] = e.resampled;
  j["cross_checked"] = e.cross_checked;
  return j;
}

TrialEnsemble ensemble_from_json(const ordered_json& j) {
  TrialEnsemble e;
  try {
    e.spec = j.at("spec").get<std::string>();
    e.d = j.at("d").get<int>();
    e.n = j.at("n").get<std::size_t>();
    e.trials = j.at("trials").get<std::size_t>();
    const auto& lam = j.at("lambda");
    e.lambda.value = lam.at("value").get<double>();
    e.lambda.method = parse_method(lam.at("method").get<std::string>());
    e.lambda.std_error = lam.at("stderr").get<double>();
    e.master_seed = j.at("seed").get<std::uint64_t>();
    e.y_values = j.at("y_values").get<std::vector<double>>();
    e.gaps = j.at("gaps").get<std::vector<double>>();
    e.resampled = j.value("resampled", std::uint64_t{0});
    e.cross_checked = j.value("cross_checked", std::uint64_t{0});
    j.at("ks").get<double>();
    j.at("tail").get<std::vector<ordered_json>>();
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("ensemble json: ") + ex.what());
  }
  if (e.d < 2 || e.n < 3 || e.trials < 1) throw ValidationError("ensemble json: bad d, n or trials");
  if (!(e.lambda.value > 0.0)) throw ValidationError("ensemble json: lambda must be positive");
  if (e.y_values.size() != e.trials || e.gaps.size() != e.trials)
    throw ValidationError("ensemble json: y_values and gaps must have `trials` entries");
  e.lambda.log_value = std::log(e.lambda.value);
  for (std::size_t i = 0; i < e.trials; ++i) {
    const double y = e.y_values[i];
    if (!(y >= 0.0)) throw ValidationError("ensemble json: negative y value");
    const double again = y_statistic(e.lambda.log_value, e.n, e.gaps[i], e.d);
    if (std::abs(again - y) > 1e-12 * std::max(std::abs(y), 1e-300) && again != y)
      throw ValidationError("ensemble json: y value " + std::to_string(i) +
                            " does not match its gap");
  }
  return e;
}

std::string ecdf_csv(const GofReport& report) {
  std::ostringstream out;
  out << "y,ecdf\n";
  for (const auto& [y, f] : report.ecdf)
    out << detail::shortest(y) << ',' << detail::shortest(f) << '\n';
  return out.str();
}

}  // namespace anglelab
