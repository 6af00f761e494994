#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pwret/io.hpp"

namespace pwret::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

long parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + " expects an integer, got '" + text +
                                "'");
  }
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + " expects an unsigned integer, got '" +
                                text + "'");
  }
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    return io::parse_double(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + " expects a number, got '" + text +
                                "'");
  }
}

std::vector<double> parse_real_list(const std::string& text,
                                    const std::string& what) {
  std::vector<double> out;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) out.push_back(parse_real(token, what));
  return out;
}

std::vector<Complex> parse_complex_list(const std::string& text,
                                        const std::string& what) {
  std::vector<Complex> out;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) {
    const auto comma = token.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument(what + " expects re,im pairs, got '" +
                                  token + "'");
    out.emplace_back(parse_real(token.substr(0, comma), what),
                     parse_real(token.substr(comma + 1), what));
  }
  return out;
}

std::string join_path(const std::string& dir, const std::string& path) {
  if (path.empty() || path.front() == '/' || dir.empty()) return path;
  return dir + "/" + path;
}

std::string format_real_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += io::format_double(v[i]);
  }
  return out;
}

std::string format_complex_list(const std::vector<Complex>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += io::format_double(v[i].real()) + "," + io::format_double(v[i].imag());
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text,
                            const std::string& base_dir) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string line, section;
  int line_number = 0;

  auto fail = [&line_number](const std::string& message) {
    throw std::invalid_argument("config line " + std::to_string(line_number) +
                                ": " + message);
  };

  while (std::getline(in, line)) {
    ++line_number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = line.substr(1, line.size() - 2);
      static const std::set<std::string> known = {
          "signal", "grid", "frame", "pipeline", "noise", "recovery", "output"};
      if (!known.count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = section + "." + key;

    if (section == "signal") {
      if (key == "type") config.signal_type = value;
      else if (key == "T") config.interval_length = parse_real(value, where);
      else if (key == "J")
        config.max_harmonic = static_cast<int>(parse_int(value, where));
      else if (key == "seed") config.signal_seed = parse_seed(value, where);
      else if (key == "coefficients")
        config.coefficients = parse_complex_list(value, where);
      else fail("unknown key " + where);
    } else if (section == "grid") {
      if (key == "T_prime") config.t_prime = parse_real(value, where);
      else if (key == "K") config.dim = static_cast<int>(parse_int(value, where));
      else if (key == "a")
        config.overlap = static_cast<int>(parse_int(value, where));
      else if (key == "n_min")
        config.n_min = static_cast<int>(parse_int(value, where));
      else if (key == "n_max")
        config.n_max = static_cast<int>(parse_int(value, where));
      else if (key == "anchor_shift")
        config.anchor_shift = parse_real(value, where);
      else if (key == "eta") config.eta = parse_real_list(value, where);
      else fail("unknown key " + where);
    } else if (section == "frame") {
      if (key == "type") config.frame_type = value;
      else if (key == "path") config.frame_path = join_path(base_dir, value);
      else if (key.rfind("path_k", 0) == 0) {
        const int k =
            static_cast<int>(parse_int(key.substr(6), "frame path dimension"));
        config.frame_paths_by_dim.emplace_back(k, join_path(base_dir, value));
      } else fail("unknown key " + where);
    } else if (section == "pipeline") {
      if (key == "mode") config.pipeline_mode = value;
      else if (key == "l1_margin") config.l1_margin = parse_real(value, where);
      else fail("unknown key " + where);
    } else if (section == "noise") {
      if (key == "sigma") config.noise_sigma = parse_real(value, where);
      else if (key == "seed") config.noise_seed = parse_seed(value, where);
      else fail("unknown key " + where);
    } else if (section == "recovery") {
      if (key == "backend") config.backend = value;
      else if (key == "zero_tol_factor")
        config.zero_tol_factor = parse_real(value, where);
      else if (key == "truncation_radius")
        config.truncation_radius = parse_real(value, where);
      else if (key == "min_singular_threshold")
        config.min_singular_threshold = parse_real(value, where);
      else if (key == "rank1_fallback_threshold")
        config.rank1_fallback_threshold = parse_real(value, where);
      else if (key == "start_block")
        config.start_block = static_cast<int>(parse_int(value, where));
      else fail("unknown key " + where);
    } else if (section == "output") {
      if (key == "tolerance") config.tolerance = parse_real(value, where);
      else fail("unknown key " + where);
    } else {
      fail("key outside any section");
    }
  }

  validate_config(config);
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto slash = path.find_last_of('/');
  const std::string dir = slash == std::string::npos ? "" : path.substr(0, slash);
  return parse_config(buffer.str(), dir);
}

void validate_config(const ScenarioConfig& config) {
  auto fail = [](const std::string& message) {
    throw std::invalid_argument("config: " + message);
  };

  if (config.signal_type != "random" && config.signal_type != "inline")
    fail("signal.type must be random or inline");
  if (!(config.interval_length > 0.0)) fail("signal.T must be positive");
  if (config.signal_type == "inline") {
    if (config.coefficients.empty() || config.coefficients.size() % 2 == 0)
      fail("inline signals need an odd number of coefficients");
  } else if (config.max_harmonic < 0) {
    fail("signal.J must be nonnegative");
  }

  if (!(config.t_prime > 0.0)) fail("grid.T_prime must be positive");
  if (config.t_prime < config.interval_length - 1e-12)
    fail("grid.T_prime must be at least signal.T");
  if (config.dim < 2) fail("grid.K must be at least 2");
  if (config.overlap < 1 || config.overlap >= config.dim)
    fail("grid.a must satisfy 1 <= a < K");
  if (config.n_min > config.n_max) fail("grid window is empty");
  if (!config.eta.empty() &&
      config.eta.size() != static_cast<std::size_t>(config.dim))
    fail("grid.eta needs one entry per offset");

  if (config.frame_type != "canonical_k2" && config.frame_type != "file")
    fail("frame.type must be canonical_k2 or file");
  if (config.frame_type == "canonical_k2" && config.dim != 2)
    fail("the canonical frame family is two dimensional");
  if (config.frame_type == "file" && frame_path_for_dim(config, config.dim).empty())
    fail("frame.type file needs frame.path");

  if (config.pipeline_mode != "plain" && config.pipeline_mode != "augmented")
    fail("pipeline.mode must be plain or augmented");
  if (config.pipeline_mode == "augmented") {
    if (!(config.t_prime > config.interval_length))
      fail("augmented mode needs T_prime strictly greater than signal.T");
    if (!(config.l1_margin >= 1.0)) fail("pipeline.l1_margin must be >= 1");
  }

  if (config.noise_sigma < 0.0) fail("noise.sigma must be nonnegative");

  static const std::set<std::string> backends = {
      "shannon_closed_form", "least_squares", "generating_function_series"};
  if (!backends.count(config.backend))
    fail("recovery.backend must be shannon_closed_form, least_squares, or "
         "generating_function_series");
  if (config.backend == "generating_function_series" &&
      !(config.truncation_radius > 0.0))
    fail("the series backend needs recovery.truncation_radius");
  if (!(config.zero_tol_factor > 0.0))
    fail("recovery.zero_tol_factor must be positive");
  if (config.start_block &&
      (*config.start_block < config.n_min || *config.start_block > config.n_max))
    fail("recovery.start_block must lie in the grid window");

  if (!(config.tolerance > 0.0)) fail("output.tolerance must be positive");
}

std::string resolved_text(const ScenarioConfig& config) {
  std::string out;
  out += "[signal]\n";
  out += "type = " + config.signal_type + "\n";
  out += "T = " + io::format_double(config.interval_length) + "\n";
  if (config.signal_type == "inline") {
    out += "coefficients = " + format_complex_list(config.coefficients) + "\n";
  } else {
    out += "J = " + std::to_string(config.max_harmonic) + "\n";
    out += "seed = " + std::to_string(config.signal_seed) + "\n";
  }
  out += "[grid]\n";
  out += "T_prime = " + io::format_double(config.t_prime) + "\n";
  out += "K = " + std::to_string(config.dim) + "\n";
  out += "a = " + std::to_string(config.overlap) + "\n";
  out += "n_min = " + std::to_string(config.n_min) + "\n";
  out += "n_max = " + std::to_string(config.n_max) + "\n";
  out += "anchor_shift = " + io::format_double(config.anchor_shift) + "\n";
  if (!config.eta.empty()) out += "eta = " + format_real_list(config.eta) + "\n";
  out += "[frame]\n";
  out += "type = " + config.frame_type + "\n";
  if (!config.frame_path.empty()) out += "path = " + config.frame_path + "\n";
  for (const auto& [k, path] : config.frame_paths_by_dim)
    out += "path_k" + std::to_string(k) + " = " + path + "\n";
  out += "[pipeline]\n";
  out += "mode = " + config.pipeline_mode + "\n";
  if (config.pipeline_mode == "augmented")
    out += "l1_margin = " + io::format_double(config.l1_margin) + "\n";
  out += "[noise]\n";
  out += "sigma = " + io::format_double(config.noise_sigma) + "\n";
  out += "seed = " + std::to_string(config.noise_seed) + "\n";
  out += "[recovery]\n";
  out += "backend = " + config.backend + "\n";
  out += "zero_tol_factor = " + io::format_double(config.zero_tol_factor) + "\n";
  if (config.truncation_radius > 0.0)
    out += "truncation_radius = " + io::format_double(config.truncation_radius) +
           "\n";
  out += "min_singular_threshold = " +
         io::format_double(config.min_singular_threshold) + "\n";
  out += "rank1_fallback_threshold = " +
         io::format_double(config.rank1_fallback_threshold) + "\n";
  if (config.start_block)
    out += "start_block = " + std::to_string(*config.start_block) + "\n";
  out += "[output]\n";
  out += "tolerance = " + io::format_double(config.tolerance) + "\n";
  return out;
}

std::string frame_path_for_dim(const ScenarioConfig& config, int dim) {
  for (const auto& [k, path] : config.frame_paths_by_dim)
    if (k == dim) return path;
  return config.frame_path;
}

}  // namespace pwret::cli
