#include "irsec/output.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

namespace irsec {

std::string format_significant(double x, int digits) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  int decimals = digits - 1;
  if (x != 0.0) {
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
    decimals = std::max(0, digits - 1 - exponent);
  }
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return buf;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  const std::string variable = to_string(result.spec.variable);
  for (const SweepRow& row : result.rows) {
    out << variable << ',' << format_significant(row.value) << ',' << to_string(row.algorithm)
        << ',' << format_significant(row.mean_secrecy_rate) << ','
        << format_significant(row.stderr_secrecy_rate) << ','
        << format_significant(row.feasible_frac) << ',' << format_significant(row.mean_iters) << ','
        << row.trials << ',' << result.spec.master_seed << '\n';
  }
  return out.str();
}

nlohmann::json trace_json(const ConvergenceRun& run) {
  nlohmann::json records = nlohmann::json::array();
  const SolveTrace& t = run.trace;
  for (std::size_t i = 0; i < t.objective.size(); ++i) {
    nlohmann::json r = {{"iteration", i}, {"objective", t.objective[i]}};
    if (i < t.grad_norm.size()) r["grad_norm"] = t.grad_norm[i];
    records.push_back(std::move(r));
  }
  return {{"algorithm", to_string(run.algorithm)},
          {"n_irs", run.n_irs},
          {"converged", t.converged},
          {"iterations", t.iterations},
          {"records", std::move(records)}};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

nlohmann::json manifest_json(const RunManifest& manifest) {
  nlohmann::json timestamp = nullptr;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    const std::time_t t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    timestamp = buf;
  }
  return {{"command", manifest.command},
          {"config_digest", manifest.config_digest},
          {"master_seed", manifest.master_seed},
          {"version", kVersion},
          {"timestamp", timestamp},
          {"outputs", manifest.outputs}};
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

}  // namespace irsec
