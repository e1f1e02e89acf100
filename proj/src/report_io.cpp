#include "shs/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace shs {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json report_to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["estimate"] = r.estimate;
  j["m"] = r.smoothing_index;
  j["L"] = r.max_level;
  j["epsilon"] = r.epsilon;
  j["epsilon_star"] = r.epsilon_star;
  j["a"] = {r.a1, r.a2, r.a3};
  j["threshold"] = r.threshold;
  j["horizon"] = r.horizon;
  j["alpha_hat"] = r.alpha_hat;
  j["rate_defaulted"] = r.rate_defaulted;
  j["bias_bound"] = r.bias_bound;
  j["variance_bound"] = r.variance_bound;
  j["smoothing_gap"] = r.smoothing_gap;
  j["bias_limit"] = r.bias_limit;
  j["variance_limit"] = r.variance_limit;
  j["smoothing_limit"] = r.smoothing_limit;
  j["bias_ok"] = r.bias_ok;
  j["variance_ok"] = r.variance_ok;
  j["smoothing_ok"] = r.smoothing_ok;
  j["total_cost_steps"] = r.total_cost;
  j["seed"] = r.seed;
  j["converged"] = r.converged;
  j["status"] = r.status;
  auto levels = nlohmann::ordered_json::array();
  for (const auto& l : r.levels) {
    nlohmann::ordered_json row;
    row["level"] = l.level;
    row["N"] = l.samples;
    row["b_hat"] = l.mean;
    row["v_hat"] = l.variance;
    row["cost"] = l.cost;
    row["N_optimal"] = l.optimal_samples;
    levels.push_back(std::move(row));
  }
  j["levels"] = std::move(levels);
  return j;
}

std::string levels_csv(const std::vector<LevelRow>& rows) {
  std::string out = "level,N,b_hat,v_hat,cost\n";
  for (const auto& l : rows) {
    out += std::to_string(l.level) + ',' + std::to_string(l.samples) + ',' +
           format_double(l.mean) + ',' + format_double(l.variance) + ',' +
           std::to_string(l.cost) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace shs
