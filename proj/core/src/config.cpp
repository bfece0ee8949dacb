#include "rssloc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rssloc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(line, key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(line, key + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(line, key + ": expected an unsigned integer, got '" + value + "'");
  }
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(line, key + ": expected true or false, got '" + value + "'");
}

}  // namespace

CliConfig parse_config(const std::string& text) {
  CliConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    const std::string qkey = section.empty() ? key : section + "." + key;
    SweepConfig& sw = cfg.sweep;

    auto is_key = [&](const char* sec, const char* name) {
      return (qkey == std::string(sec) + "." + name) || key == name;
    };

    if (is_key("sweep", "placements")) {
      sw.placements.clear();
      for (const std::string& item : split_list(value)) {
        if (item == "random") {
          sw.placements.push_back(PlacementKind::Random);
        } else if (item == "designed") {
          sw.placements.push_back(PlacementKind::Designed);
        } else {
          throw ConfigError(line_no, "placements: expected random or designed, got '" + item + "'");
        }
      }
      if (sw.placements.empty()) throw ConfigError(line_no, "placements: empty list");
    } else if (is_key("sweep", "M_values")) {
      sw.anchor_counts.clear();
      for (const std::string& item : split_list(value)) {
        const long long m = parse_int(line_no, key, item);
        if (m < 3) throw ConfigError(line_no, "M_values: M must be >= 3");
        sw.anchor_counts.push_back(static_cast<int>(m));
      }
      if (sw.anchor_counts.empty()) throw ConfigError(line_no, "M_values: empty list");
    } else if (is_key("sweep", "zeta_values")) {
      sw.zeta_values.clear();
      for (const std::string& item : split_list(value)) {
        const double z = parse_double(line_no, key, item);
        if (z < 0.0) throw ConfigError(line_no, "zeta_values: zeta must be >= 0");
        sw.zeta_values.push_back(z);
      }
      if (sw.zeta_values.empty()) throw ConfigError(line_no, "zeta_values: empty list");
    } else if (is_key("sweep", "sigma_values")) {
      sw.sigma_values.clear();
      for (const std::string& item : split_list(value)) {
        const double s = parse_double(line_no, key, item);
        if (s < 0.0) throw ConfigError(line_no, "sigma_values: sigma must be >= 0");
        sw.sigma_values.push_back(s);
      }
      if (sw.sigma_values.empty()) throw ConfigError(line_no, "sigma_values: empty list");
    } else if (is_key("sweep", "range_variance")) {
      const double v = parse_double(line_no, key, value);
      if (v < 0.0) throw ConfigError(line_no, "range_variance must be >= 0");
      sw.range_variance = v;
    } else if (is_key("sweep", "methods")) {
      sw.methods.clear();
      for (const std::string& item : split_list(value)) {
        const auto m = method_from_label(item);
        if (!m) {
          std::string valid;
          for (Method mm : kAllMethods) {
            if (!valid.empty()) valid += ", ";
            valid += std::string(method_label(mm));
          }
          throw ConfigError(line_no, "methods: unknown label '" + item +
                                         "' (valid: " + valid + ")");
        }
        sw.methods.push_back(*m);
      }
      if (sw.methods.empty()) throw ConfigError(line_no, "methods: empty list");
    } else if (is_key("sweep", "trials_per_point")) {
      const long long t = parse_int(line_no, key, value);
      if (t < 1) throw ConfigError(line_no, "trials_per_point must be >= 1");
      sw.trials_per_point = static_cast<int>(t);
    } else if (is_key("sweep", "master_seed")) {
      sw.master_seed = parse_u64(line_no, key, value);
    } else if (is_key("sweep", "ml_restarts")) {
      const long long r = parse_int(line_no, key, value);
      if (r < 1) throw ConfigError(line_no, "ml_restarts must be >= 1");
      sw.ml_restarts = static_cast<int>(r);
    } else if (is_key("channel", "d0")) {
      const double v = parse_double(line_no, key, value);
      if (!(v > 0.0)) throw ConfigError(line_no, "d0 must be > 0");
      sw.channel.d0 = v;
    } else if (is_key("channel", "L0")) {
      sw.channel.L0 = parse_double(line_no, key, value);
    } else if (is_key("channel", "gamma")) {
      const double v = parse_double(line_no, key, value);
      if (!(v > 0.0)) throw ConfigError(line_no, "gamma must be > 0");
      sw.channel.gamma = v;
    } else if (is_key("rounding", "tt")) {
      const long long v = parse_int(line_no, key, value);
      if (v < 1) throw ConfigError(line_no, "tt must be >= 1");
      sw.budget.tt = static_cast<int>(v);
    } else if (is_key("rounding", "anchor_candidates")) {
      const long long v = parse_int(line_no, key, value);
      if (v < 1) throw ConfigError(line_no, "anchor_candidates must be >= 1");
      sw.budget.anchor_candidates = static_cast<int>(v);
    } else if (is_key("rounding", "max_combinations")) {
      const long long v = parse_int(line_no, key, value);
      if (v < 1) throw ConfigError(line_no, "max_combinations must be >= 1");
      sw.budget.max_combinations = static_cast<int>(v);
    } else if (is_key("variants", "literal_plus_sign")) {
      sw.variants.literal_plus_sign = parse_bool(line_no, key, value);
    } else if (is_key("variants", "literal_score_noise")) {
      sw.variants.literal_score_noise = parse_bool(line_no, key, value);
    } else if (is_key("variants", "literal_sigma_d")) {
      sw.variants.literal_sigma_d = parse_bool(line_no, key, value);
    } else if (is_key("variants", "cartesian_anchors")) {
      sw.variants.cartesian_anchors = parse_bool(line_no, key, value);
    } else if (is_key("variants", "perturbation")) {
      if (value == "uniform_disk") {
        sw.perturbation = AnchorPerturbation::UniformDisk;
      } else if (value == "disk_boundary") {
        sw.perturbation = AnchorPerturbation::DiskBoundary;
      } else if (value == "truncated_gaussian") {
        sw.perturbation = AnchorPerturbation::TruncatedGaussian;
      } else {
        throw ConfigError(line_no,
                          "perturbation: expected uniform_disk, disk_boundary or "
                          "truncated_gaussian, got '" + value + "'");
      }
    } else if (is_key("solver", "tolerance")) {
      const double v = parse_double(line_no, key, value);
      if (!(v > 0.0)) throw ConfigError(line_no, "tolerance must be > 0");
      sw.solver.tolerance = v;
    } else if (is_key("solver", "max_iterations")) {
      const long long v = parse_int(line_no, key, value);
      if (v < 1) throw ConfigError(line_no, "max_iterations must be >= 1");
      sw.solver.max_iterations = static_cast<int>(v);
    } else if (is_key("run", "output_dir")) {
      cfg.output_dir = value;
    } else if (is_key("run", "parallelism")) {
      const long long v = parse_int(line_no, key, value);
      if (v < 1) throw ConfigError(line_no, "parallelism must be >= 1");
      cfg.parallelism = static_cast<int>(v);
    } else if (is_key("run", "verbosity")) {
      cfg.verbosity = static_cast<int>(parse_int(line_no, key, value));
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  cfg.sweep.validate();
  return cfg;
}

CliConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const CliConfig& cfg) {
  const SweepConfig& sw = cfg.sweep;
  std::ostringstream os;
  os << "[sweep]\n";
  os << "placements = ";
  for (std::size_t i = 0; i < sw.placements.size(); ++i) {
    os << (i ? "," : "") << to_string(sw.placements[i]);
  }
  os << "\nM_values = ";
  for (std::size_t i = 0; i < sw.anchor_counts.size(); ++i) {
    os << (i ? "," : "") << sw.anchor_counts[i];
  }
  os << "\nzeta_values = ";
  for (std::size_t i = 0; i < sw.zeta_values.size(); ++i) {
    os << (i ? "," : "") << format_double(sw.zeta_values[i]);
  }
  os << "\nsigma_values = ";
  for (std::size_t i = 0; i < sw.sigma_values.size(); ++i) {
    os << (i ? "," : "") << format_double(sw.sigma_values[i]);
  }
  os << "\nrange_variance = " << format_double(sw.range_variance);
  os << "\nmethods = ";
  for (std::size_t i = 0; i < sw.methods.size(); ++i) {
    os << (i ? "," : "") << method_label(sw.methods[i]);
  }
  os << "\ntrials_per_point = " << sw.trials_per_point;
  os << "\nmaster_seed = " << sw.master_seed;
  os << "\nml_restarts = " << sw.ml_restarts;
  os << "\n\n[channel]\n";
  os << "d0 = " << format_double(sw.channel.d0);
  os << "\nL0 = " << format_double(sw.channel.L0);
  os << "\ngamma = " << format_double(sw.channel.gamma);
  os << "\n\n[rounding]\n";
  os << "tt = " << sw.budget.tt;
  os << "\nanchor_candidates = " << sw.budget.anchor_candidates;
  os << "\nmax_combinations = " << sw.budget.max_combinations;
  os << "\n\n[variants]\n";
  os << "literal_plus_sign = " << (sw.variants.literal_plus_sign ? "true" : "false");
  os << "\nliteral_score_noise = " << (sw.variants.literal_score_noise ? "true" : "false");
  os << "\nliteral_sigma_d = " << (sw.variants.literal_sigma_d ? "true" : "false");
  os << "\ncartesian_anchors = " << (sw.variants.cartesian_anchors ? "true" : "false");
  os << "\nperturbation = ";
  switch (sw.perturbation) {
    case AnchorPerturbation::UniformDisk: os << "uniform_disk"; break;
    case AnchorPerturbation::DiskBoundary: os << "disk_boundary"; break;
    case AnchorPerturbation::TruncatedGaussian: os << "truncated_gaussian"; break;
  }
  os << "\n\n[solver]\n";
  os << "tolerance = " << format_double(sw.solver.tolerance);
  os << "\nmax_iterations = " << sw.solver.max_iterations;
  os << "\n\n[run]\n";
  os << "output_dir = " << cfg.output_dir;
  os << "\nparallelism = " << cfg.parallelism;
  os << "\nverbosity = " << cfg.verbosity;
  os << "\n";
  return os.str();
}

}  // namespace rssloc
