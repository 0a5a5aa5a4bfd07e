#include <cmath>
#include <sstream>

#include "condlight/cli.hpp"

namespace condlight::cli {

namespace {

double parse_number(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + token + "'");
  }
  if (used != token.size() || !std::isfinite(v)) {
    throw UsageError("not a finite number: '" + token + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::vector<double> make_range(double start, double stop, int count, Spacing spacing) {
  if (count < 1) throw UsageError("range count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> values(count);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    if (spacing == Spacing::linear) {
      values[i] = start + (stop - start) * t;
    } else {
      if (!(start < 1.0 && stop < 1.0)) {
        throw UsageError("log_one_minus spacing needs values below 1");
      }
      values[i] = 1.0 - (1.0 - start) * std::pow((1.0 - stop) / (1.0 - start), t);
    }
  }
  values.front() = start;
  values.back() = stop;
  return values;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw UsageError("empty grid");
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("range must be start:stop:count, got '" + text + "'");
    const double count = parse_number(parts[2]);
    if (count < 1 || count != std::floor(count)) {
      throw UsageError("range count must be a positive integer");
    }
    return make_range(parse_number(parts[0]), parse_number(parts[1]), static_cast<int>(count));
  }
  std::vector<double> values;
  for (const auto& token : split(text, ',')) values.push_back(parse_number(token));
  return values;
}

std::string describe_grid(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ' ';
    s += format_number(values[i]);
  }
  return s;
}

}  // namespace condlight::cli
