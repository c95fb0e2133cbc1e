#include "anticip/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anticip {

namespace {

// E(z^k) for z uniform on [lo, hi], or lo^k for an atom.
double segment_moment(const LawSegment& s, int k) {
  if (s.hi == s.lo) return std::pow(s.lo, k);
  return (std::pow(s.hi, k + 1) - std::pow(s.lo, k + 1)) / ((k + 1) * (s.hi - s.lo));
}

double parse_number(std::string_view text, const std::string& context) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(context + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::string format_name(const std::vector<LawSegment>& segments) {
  std::ostringstream out;
  out << "table[";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out << ';';
    out << segments[i].lo << ',' << segments[i].hi << ',' << segments[i].mass;
  }
  out << ']';
  return out.str();
}

}  // namespace

void MomentTuple::validate(double tol) const {
  if (m2 < m1 * m1 - tol) throw std::invalid_argument("moments: m2 < m1^2");
  if (m4 < m2 * m2 - tol) throw std::invalid_argument("moments: m4 < m2^2");
}

SamplingDistribution::SamplingDistribution(std::vector<LawSegment> segments, bool symmetric,
                                           std::string name)
    : segments_(std::move(segments)), symmetric_(symmetric), name_(std::move(name)) {
  if (segments_.empty()) throw std::invalid_argument("sampling law: no segments");
  double total = 0.0;
  for (const auto& s : segments_) {
    if (!(s.lo >= -1.0 && s.hi <= 1.0 && s.lo <= s.hi)) {
      throw std::invalid_argument("sampling law: segment outside [-1, 1] or reversed");
    }
    if (!(s.mass >= 0.0)) throw std::invalid_argument("sampling law: negative mass");
    total += s.mass;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("sampling law: masses must sum to 1");

  double running = 0.0;
  double raw[4] = {0.0, 0.0, 0.0, 0.0};
  for (auto& s : segments_) {
    s.mass /= total;
    running += s.mass;
    cumulative_.push_back(running);
    for (int k = 1; k <= 4; ++k) raw[k - 1] += s.mass * segment_moment(s, k);
  }
  cumulative_.back() = 1.0;
  moments_ = {raw[0], raw[1], raw[2], raw[3]};
  moments_.validate();
  if (symmetric_ && (std::fabs(moments_.m1) > 1e-12 || std::fabs(moments_.m3) > 1e-12)) {
    throw std::invalid_argument("sampling law declared symmetric but has nonzero odd moments");
  }
}

SamplingDistribution SamplingDistribution::uniform() {
  return SamplingDistribution({{-1.0, 1.0, 1.0}}, true, "uniform");
}

SamplingDistribution SamplingDistribution::two_point(double y0) {
  if (!(y0 >= 0.0 && y0 <= 1.0)) throw std::invalid_argument("two-point law needs 0 <= y0 <= 1");
  std::ostringstream name;
  name << "two-point:" << y0;
  return SamplingDistribution({{-y0, -y0, 0.5}, {y0, y0, 0.5}}, true, name.str());
}

SamplingDistribution SamplingDistribution::table(std::vector<LawSegment> segments,
                                                 bool declared_symmetric) {
  auto name = format_name(segments);
  return SamplingDistribution(std::move(segments), declared_symmetric, std::move(name));
}

SamplingDistribution SamplingDistribution::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open law table '" + path + "'");
  std::vector<LawSegment> segments;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 3) throw std::invalid_argument(path + ": expected rows lo,hi,mass");
    const bool header = first && fields[0].find_first_of("0123456789") == std::string_view::npos;
    first = false;
    if (header) continue;
    segments.push_back({parse_number(fields[0], path), parse_number(fields[1], path),
                        parse_number(fields[2], path)});
  }
  auto law = table(std::move(segments));
  law.name_ = "table:" + path;
  return law;
}

SamplingDistribution SamplingDistribution::parse(std::string_view spec) {
  if (spec == "uniform") return uniform();
  if (spec.starts_with("two-point:")) {
    return two_point(parse_number(spec.substr(10), "two-point law"));
  }
  if (spec.starts_with("table:")) return from_table_file(std::string(spec.substr(6)));
  throw std::invalid_argument("unknown distribution '" + std::string(spec) +
                              "' (expected uniform, two-point:<y0> or table:<path>)");
}

double SamplingDistribution::quantile(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto i = static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cumulative_.begin(), static_cast<std::ptrdiff_t>(segments_.size()) - 1));
  const auto& s = segments_[i];
  if (s.hi == s.lo) return s.lo;
  const double start = i == 0 ? 0.0 : cumulative_[i - 1];
  const double frac = s.mass > 0.0 ? std::clamp((u - start) / s.mass, 0.0, 1.0) : 0.0;
  return s.lo + frac * (s.hi - s.lo);
}

double SamplingDistribution::near_zero_probability(double eps) const {
  double q = 0.0;
  for (const auto& s : segments_) {
    if (s.hi == s.lo) {
      if (std::fabs(s.lo) < eps) q += s.mass;
      continue;
    }
    const double overlap = std::max(0.0, std::min(s.hi, eps) - std::max(s.lo, -eps));
    q += s.mass * overlap / (s.hi - s.lo);
  }
  return std::min(q, 1.0);
}

}  // namespace anticip
