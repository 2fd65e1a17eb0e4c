#include "nlt/mask_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "nlt/errors.hpp"

namespace nlt {
namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

TermKind parse_kind(const std::string& s, const std::string& source, int line) {
  if (s == "sin") return TermKind::Sin;
  if (s == "cos") return TermKind::Cos;
  if (s == "linear") return TermKind::Linear;
  throw ParseError(source, line, "unknown term type '" + s + "' (expected sin, cos or linear)");
}

const char* kind_name(TermKind k) {
  switch (k) {
    case TermKind::Sin: return "sin";
    case TermKind::Cos: return "cos";
    case TermKind::Linear: return "linear";
  }
  return "?";
}

template <typename T>
T parse_number(const std::string& s, const std::string& what, const std::string& source, int line) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError(source, line, "invalid " + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

MaskTerm parse_mask_term(std::string_view fields, const std::string& source, int line) {
  const auto tok = split_ws(fields);
  if (tok.size() != 4) {
    throw ParseError(source, line, "term needs 4 fields: <type> <amplitude> <harmonic> <axis>");
  }
  MaskTerm t;
  const auto star = tok[0].find('*');
  if (star != std::string::npos) {
    t.kind = parse_kind(tok[0].substr(0, star), source, line);
    t.kind_y = parse_kind(tok[0].substr(star + 1), source, line);
    if (t.kind == TermKind::Linear || t.kind_y == TermKind::Linear) {
      throw ParseError(source, line, "linear terms cannot appear in a product");
    }
  } else {
    t.kind = parse_kind(tok[0], source, line);
  }
  t.amplitude = parse_number<double>(tok[1], "amplitude", source, line);
  t.harmonic = parse_number<int>(tok[2], "harmonic", source, line);
  if (t.harmonic < 0) throw ParseError(source, line, "harmonic must be non-negative");
  if (tok[3] == "x") {
    t.axis = TermAxis::X;
  } else if (tok[3] == "y") {
    t.axis = TermAxis::Y;
  } else if (tok[3] == "xy") {
    t.axis = TermAxis::XY;
  } else {
    throw ParseError(source, line, "unknown axis '" + tok[3] + "' (expected x, y or xy)");
  }
  if ((t.axis == TermAxis::XY) != (star != std::string::npos)) {
    throw ParseError(source, line, "product terms (f*g) go with axis xy and only there");
  }
  if (t.kind == TermKind::Linear) {
    const double p = t.amplitude * t.harmonic;
    if (std::abs(p - std::round(p)) > kExactTol) {
      throw ParseError(source, line, "linear coefficient must be an integer number of momentum quanta");
    }
  }
  return t;
}

std::string format_mask_term(const MaskTerm& t) {
  std::string kind = kind_name(t.kind);
  if (t.axis == TermAxis::XY) kind += std::string("*") + kind_name(t.kind_y);
  const char* axis = t.axis == TermAxis::X ? "x" : t.axis == TermAxis::Y ? "y" : "xy";
  return kind + " " + format_double(t.amplitude) + " " + std::to_string(t.harmonic) + " " + axis;
}

MaskDefinition parse_mask(std::istream& in, const std::string& source) {
  MaskDefinition def;
  bool have_axes = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    const auto tok = split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] == "axes") {
      if (tok.size() != 2) throw ParseError(source, line, "axes takes one value");
      def.dims = parse_number<int>(tok[1], "axis count", source, line);
      if (def.dims != 1 && def.dims != 2) throw ParseError(source, line, "axes must be 1 or 2");
      have_axes = true;
    } else if (tok[0] == "period") {
      if (tok.size() != 2) throw ParseError(source, line, "period takes one value");
      def.period = parse_number<double>(tok[1], "period", source, line);
      if (!(def.period > 0.0)) throw ParseError(source, line, "period must be positive");
    } else if (tok[0] == "term") {
      const auto pos = raw.find("term");
      def.terms.push_back(parse_mask_term(std::string_view(raw).substr(pos + 4), source, line));
      if (def.dims == 1 && def.terms.back().axis != TermAxis::X) {
        throw ParseError(source, line, "1D masks only accept x terms");
      }
    } else {
      throw ParseError(source, line, "unknown keyword '" + tok[0] + "'");
    }
  }
  if (!have_axes) throw ParseError(source, 0, "missing 'axes' line");
  return def;
}

MaskDefinition load_mask(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mask file " + path);
  return parse_mask(in, path);
}

std::string format_mask(const MaskDefinition& def) {
  std::string out = "axes " + std::to_string(def.dims) + "\nperiod " + format_double(def.period) + "\n";
  for (const MaskTerm& t : def.terms) out += "term " + format_mask_term(t) + "\n";
  return out;
}

}  // namespace nlt
