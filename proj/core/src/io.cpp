#include "pwret/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pwret::io {

namespace {

std::string format_complex(const Complex& v) {
  return format_double(v.real()) + "," + format_double(v.imag());
}

std::string format_vector(std::span<const Complex> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_complex(v[i]);
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("expected re,im pair, got '" + text + "'");
  return {parse_double(text.substr(0, comma)),
          parse_double(text.substr(comma + 1))};
}

std::vector<Complex> parse_vector(const std::string& text) {
  std::vector<Complex> out;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) out.push_back(parse_complex(token));
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Splits `key = value`; returns false for lines that are not assignments.
bool split_assignment(const std::string& line, std::string& key,
                      std::string& value) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) return false;
  key = trim(line.substr(0, eq));
  value = trim(line.substr(eq + 1));
  return !key.empty();
}

long parse_long(const std::string& text) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("expected integer, got '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("expected unsigned integer, got '" + text + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("expected number, got '" + text + "'");
  return v;
}

std::string write_signal(const TimeLimitedSignal& x) {
  std::string out;
  out += "T = " + format_double(x.interval_length()) + "\n";
  out += "J = " + std::to_string(x.max_harmonic()) + "\n";
  out += "coefficients = " + format_vector(x.coefficients()) + "\n";
  return out;
}

TimeLimitedSignal read_signal(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::string line, key, value;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (split_assignment(line, key, value)) fields[key] = value;
  }
  if (!fields.count("T") || !fields.count("coefficients"))
    throw std::invalid_argument("signal record needs T and coefficients");
  std::vector<Complex> coeffs = parse_vector(fields["coefficients"]);
  if (fields.count("J")) {
    const long j = parse_long(fields["J"]);
    if (coeffs.size() != static_cast<std::size_t>(2 * j + 1))
      throw std::invalid_argument("signal record J disagrees with coefficients");
  }
  return TimeLimitedSignal(parse_double(fields["T"]), std::move(coeffs));
}

std::string write_frame(const FrameFamily& frame) {
  std::string out;
  out += "K = " + std::to_string(frame.dim()) + "\n";
  out += "M = " + std::to_string(frame.count()) + "\n";
  for (int m = 0; m < frame.count(); ++m)
    out += "vector = " + format_vector(frame.vector(m)) + "\n";
  return out;
}

FrameFamily read_frame(std::istream& in) {
  std::vector<std::vector<Complex>> vectors;
  long k = -1, m = -1;
  std::string line, key, value;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!split_assignment(line, key, value)) continue;
    if (key == "K") k = parse_long(value);
    else if (key == "M") m = parse_long(value);
    else if (key == "vector") vectors.push_back(parse_vector(value));
  }
  FrameFamily frame{std::move(vectors)};
  if (k >= 0 && frame.dim() != k)
    throw std::invalid_argument("frame record K disagrees with vectors");
  if (m >= 0 && frame.count() != m)
    throw std::invalid_argument("frame record M disagrees with vectors");
  return frame;
}

std::string write_grid_csv(const InterpolationGrid& grid) {
  std::string out = "n,k,lambda_re,lambda_im\n";
  for (int n = grid.n_min(); n <= grid.n_max(); ++n) {
    const std::vector<Complex> pts = grid.block_points(n);
    for (int k = 0; k < grid.dim(); ++k)
      out += std::to_string(n) + "," + std::to_string(k) + "," +
             format_double(pts[k].real()) + "," +
             format_double(pts[k].imag()) + "\n";
  }
  return out;
}

std::string write_measurements(const MeasurementSet& ms) {
  const InterpolationGrid& grid = ms.grid();
  const FrameFamily& frame = ms.frame();
  std::string out = "# measurement-set v1\n";
  out += "# grid.K = " + std::to_string(grid.dim()) + "\n";
  out += "# grid.a = " + std::to_string(grid.overlap()) + "\n";
  out += "# grid.beta = " + format_double(grid.block_spacing()) + "\n";
  out += "# grid.n_min = " + std::to_string(grid.n_min()) + "\n";
  out += "# grid.n_max = " + std::to_string(grid.n_max()) + "\n";
  out += "# grid.offsets = " + format_vector(grid.offsets()) + "\n";
  out += "# frame.K = " + std::to_string(frame.dim()) + "\n";
  out += "# frame.M = " + std::to_string(frame.count()) + "\n";
  for (int m = 0; m < frame.count(); ++m)
    out += "# frame.vector = " + format_vector(frame.vector(m)) + "\n";
  out += "# noise.enabled = " + std::to_string(ms.noise().enabled ? 1 : 0) +
         "\n";
  out += "# noise.sigma = " + format_double(ms.noise().sigma) + "\n";
  out += "# noise.seed = " + std::to_string(ms.noise().seed) + "\n";
  out += "# augmented.enabled = " +
         std::to_string(ms.augmented().enabled ? 1 : 0) + "\n";
  out += "# augmented.l1_bound = " + format_double(ms.augmented().l1_bound) +
         "\n";
  out += "# augmented.t_prime = " + format_double(ms.augmented().t_prime) +
         "\n";
  out += "n,m,c\n";
  for (int n = grid.n_min(); n <= grid.n_max(); ++n)
    for (int m = 0; m < ms.branch_count(); ++m)
      out += std::to_string(n) + "," + std::to_string(m) + "," +
             format_double(ms.sample(n, m)) + "\n";
  return out;
}

MeasurementSet read_measurements(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::vector<std::vector<Complex>> frame_vectors;
  std::vector<double> samples;
  bool in_body = false;
  std::string line, key, value;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (split_assignment(line.substr(1), key, value)) {
        if (key == "frame.vector") frame_vectors.push_back(parse_vector(value));
        else meta[key] = value;
      }
      continue;
    }
    if (!in_body) {
      if (line != "n,m,c")
        throw std::invalid_argument("measurement body must start with n,m,c");
      in_body = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("malformed measurement row '" + line + "'");
    samples.push_back(parse_double(line.substr(c2 + 1)));
  }

  for (const char* required :
       {"grid.K", "grid.a", "grid.beta", "grid.n_min", "grid.n_max",
        "grid.offsets"})
    if (!meta.count(required))
      throw std::invalid_argument(std::string("measurement header misses ") +
                               required);

  std::vector<Complex> offsets = parse_vector(meta["grid.offsets"]);
  if (static_cast<long>(offsets.size()) != parse_long(meta["grid.K"]))
    throw std::invalid_argument("measurement header grid.K disagrees");
  InterpolationGrid grid(std::move(offsets), parse_double(meta["grid.beta"]),
                         static_cast<int>(parse_long(meta["grid.a"])),
                         static_cast<int>(parse_long(meta["grid.n_min"])),
                         static_cast<int>(parse_long(meta["grid.n_max"])));
  FrameFamily frame(std::move(frame_vectors));

  NoiseDescriptor noise;
  if (meta.count("noise.enabled")) {
    noise.enabled = parse_long(meta["noise.enabled"]) != 0;
    noise.sigma = parse_double(meta["noise.sigma"]);
    noise.seed = parse_u64(meta["noise.seed"]);
  }
  AugmentedDescriptor augmented;
  if (meta.count("augmented.enabled")) {
    augmented.enabled = parse_long(meta["augmented.enabled"]) != 0;
    augmented.l1_bound = parse_double(meta["augmented.l1_bound"]);
    augmented.t_prime = parse_double(meta["augmented.t_prime"]);
  }
  return MeasurementSet(std::move(grid), std::move(frame), std::move(samples),
                        noise, augmented);
}

std::string write_fourier_values_csv(const InterpolationGrid& grid,
                                     std::span<const Complex> values,
                                     const std::vector<bool>& resolved) {
  if (values.size() != static_cast<std::size_t>(grid.point_count()) ||
      resolved.size() != values.size())
    throw std::invalid_argument(
        "values/resolved must have one entry per grid point");
  std::string out = "lambda_re,lambda_im,value_re,value_im\n";
  for (int idx = 0; idx < grid.point_count(); ++idx) {
    if (!resolved[idx]) continue;
    const Complex p = grid.point(idx);
    out += format_double(p.real()) + "," + format_double(p.imag()) + "," +
           format_double(values[idx].real()) + "," +
           format_double(values[idx].imag()) + "\n";
  }
  return out;
}

}  // namespace pwret::io
