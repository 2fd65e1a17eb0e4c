#include "nlt/scenario.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "nlt/errors.hpp"
#include "nlt/grid_io.hpp"
#include "nlt/mask_io.hpp"

namespace nlt {
namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

template <typename T>
T number(const Entry& e, const std::string& text, const std::string& source) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(source, e.line, e.section + "." + e.key + ": '" + text + "' is not a valid number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw ParseError(source, e.line, e.section + "." + e.key + ": value must be finite");
  }
  return v;
}

template <typename T>
T number(const Entry& e, const std::string& source) {
  return number<T>(e, e.value, source);
}

bool boolean(const Entry& e, const std::string& source) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ParseError(source, e.line, e.section + "." + e.key + ": expected true or false");
}

DistanceNorm norm_of(const Entry& e, const std::string& source) {
  if (e.value == "l1") return DistanceNorm::L1;
  if (e.value == "l2") return DistanceNorm::L2;
  throw ParseError(source, e.line, e.section + "." + e.key + ": expected l1 or l2");
}

std::string norm_name(DistanceNorm n) { return n == DistanceNorm::L1 ? "l1" : "l2"; }

std::vector<Entry> lex_text(std::string_view text, const std::string& source) {
  std::vector<Entry> out;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source, line_no, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(source, line_no, "empty section name");
      out.push_back({section, "", "", line_no});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
    Entry e{section, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (e.key.empty()) throw ParseError(source, line_no, "missing key before '='");
    if (e.value.empty()) throw ParseError(source, line_no, "missing value for '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::string json_scalar(const nlohmann::json& v, const std::string& source, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ParseError(source, 0, where + ": expected a scalar value");
}

std::vector<Entry> lex_json(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(source, 0, "top level must be an object");
  std::vector<Entry> out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_object()) {
      out.push_back({"", key, json_scalar(value, source, key), 0});
      continue;
    }
    out.push_back({key, "", "", 0});
    for (const auto& [k, v] : value.items()) {
      if (v.is_array()) {
        for (const auto& item : v) out.push_back({key, k, json_scalar(item, source, key + "." + k), 0});
      } else {
        out.push_back({key, k, json_scalar(v, source, key + "." + k), 0});
      }
    }
  }
  return out;
}

MomentumIndex parse_index(const Entry& e, const std::vector<std::string>& tok, std::size_t first, int dims,
                          const std::string& source) {
  MomentumIndex m;
  m.x = number<int>(e, tok[first], source);
  if (dims == 2) m.y = number<int>(e, tok[first + 1], source);
  return m;
}

std::string index_text(const MomentumIndex& m, int dims) {
  return dims == 1 ? std::to_string(m.x) : std::to_string(m.x) + " " + std::to_string(m.y);
}

Scenario build(const std::vector<Entry>& entries, const std::string& source) {
  Scenario s;
  std::map<std::string, int> seen_sections;
  std::map<std::string, int> seen_keys;
  bool has_mask = false;
  int mask_line = 0;
  int unitary_line = 0;
  int window_line = 0;
  int k0_line = 0;
  std::vector<Entry> terms;
  std::vector<Entry> coeffs;
  const Entry* k0_entry = nullptr;

  for (const Entry& e : entries) {
    if (e.key.empty()) {
      if (seen_sections.count(e.section)) throw ParseError(source, e.line, "duplicate section [" + e.section + "]");
      seen_sections[e.section] = e.line;
      if (e.section == "mask") {
        has_mask = true;
        mask_line = e.line;
      } else if (e.section == "unitary") {
        unitary_line = e.line;
      } else if (e.section != "noise" && e.section != "lattice" && e.section != "input" && e.section != "optics" && e.section != "camera" &&
                 e.section != "retrieval" && e.section != "output") {
        throw ParseError(source, e.line, "unknown section [" + e.section + "]");
      }
      continue;
    }
    const std::string id = e.section + "." + e.key;
    const bool repeatable = id == "mask.term" || id == "input.coefficient";
    if (!repeatable && seen_keys.count(id)) throw ParseError(source, e.line, "duplicate key '" + e.key + "'");
    seen_keys[id] = e.line;

    if (id == ".name") {
      s.name = e.value;
    } else if (id == "lattice.dims") {
      s.dims = number<int>(e, source);
    } else if (id == "lattice.modes") {
      s.modes = number<int>(e, source);
    } else if (id == "lattice.period") {
      s.period = number<double>(e, source);
    } else if (id == "mask.samples") {
      s.samples_per_period = number<int>(e, source);
    } else if (id == "mask.term") {
      terms.push_back(e);
    } else if (id == "unitary.seed") {
      s.unitary_seed = number<std::uint64_t>(e, source);
    } else if (id == "input.k0") {
      k0_entry = &e;
      k0_line = e.line;
    } else if (id == "input.coefficient") {
      coeffs.push_back(e);
    } else if (id == "optics.encoding") {
      if (e.value == "phase_only") {
        s.encoding = EncodeMode::PhaseOnly;
      } else if (e.value == "bolduc") {
        s.encoding = EncodeMode::Bolduc;
      } else {
        throw ParseError(source, e.line, "optics.encoding: expected phase_only or bolduc");
      }
    } else if (id == "optics.blaze_ratio") {
      s.blaze_ratio = number<int>(e, source);
    } else if (id == "optics.samples_per_carrier") {
      s.samples_per_carrier = number<int>(e, source);
    } else if (id == "optics.zeroth_order") {
      s.zeroth_order = number<double>(e, source);
      if (s.zeroth_order < 0.0) throw ParseError(source, e.line, "optics.zeroth_order must be >= 0");
    } else if (id == "camera.pixels_per_mode") {
      s.pixels_per_mode = number<int>(e, source);
      if (s.pixels_per_mode < 1) throw ParseError(source, e.line, "camera.pixels_per_mode must be >= 1");
    } else if (id == "camera.window") {
      s.window = number<int>(e, source);
      window_line = e.line;
    } else if (id == "camera.counts_total") {
      s.counts_total = number<std::int64_t>(e, source);
      if (s.counts_total < 0) throw ParseError(source, e.line, "camera.counts_total must be >= 0");
    } else if (id == "noise.seed") {
      s.noise_seed = number<std::uint64_t>(e, source);
    } else if (id == "retrieval.enabled") {
      s.retrieval.enabled = boolean(e, source);
    } else if (id == "retrieval.runs") {
      s.retrieval.runs = number<int>(e, source);
      if (s.retrieval.runs < 1) throw ParseError(source, e.line, "retrieval.runs must be >= 1");
    } else if (id == "retrieval.iterations") {
      s.retrieval.iterations = number<int>(e, source);
      if (s.retrieval.iterations < 1) throw ParseError(source, e.line, "retrieval.iterations must be >= 1");
    } else if (id == "retrieval.seed") {
      s.retrieval.seed = number<std::uint64_t>(e, source);
    } else if (id == "retrieval.stop_tolerance") {
      s.retrieval.stop_tolerance = number<double>(e, source);
    } else if (id == "retrieval.selection") {
      s.retrieval.selection = norm_of(e, source);
    } else if (id == "retrieval.trace") {
      s.retrieval.trace = norm_of(e, source);
    } else if (id == "retrieval.threads") {
      s.retrieval.threads = number<int>(e, source);
      if (s.retrieval.threads < 0) throw ParseError(source, e.line, "retrieval.threads must be >= 0");
    } else if (id == "output.directory") {
      s.output_dir = e.value;
    } else if (id == "output.indexing") {
      if (e.value == "physical") {
        s.indexing = IdlerIndexing::Physical;
      } else if (e.value == "partner") {
        s.indexing = IdlerIndexing::Partner;
      } else {
        throw ParseError(source, e.line, "output.indexing: expected physical or partner");
      }
    } else {
      throw ParseError(source, e.line, "unknown key '" + e.key + "'" +
                                           (e.section.empty() ? std::string() : " in [" + e.section + "]"));
    }
  }

  if (s.name.empty()) throw ParseError(source, 0, "missing 'name'");
  if (!seen_keys.count("lattice.modes") || !seen_keys.count("lattice.dims") || !seen_keys.count("lattice.period")) {
    throw ParseError(source, seen_sections.count("lattice") ? seen_sections["lattice"] : 0,
                     "[lattice] needs dims, modes and period");
  }
  LatticeSpec lat(1, 3);
  try {
    lat = s.lattice();
  } catch (const std::invalid_argument& ex) {
    throw ParseError(source, seen_keys["lattice.modes"], ex.what());
  }
  if (has_mask == s.unitary_seed.has_value()) {
    throw ParseError(source, std::max(mask_line, unitary_line), "give exactly one of [mask] and [unitary] seed");
  }
  if (unitary_line > 0 && !s.unitary_seed) throw ParseError(source, unitary_line, "[unitary] needs a seed");

  if (has_mask) {
    MaskDefinition def;
    def.dims = s.dims;
    def.period = s.period;
    for (const Entry& t : terms) {
      def.terms.push_back(parse_mask_term(t.value, source, t.line));
      if (s.dims == 1 && def.terms.back().axis != TermAxis::X) {
        throw ParseError(source, t.line, "1D masks only take x terms");
      }
    }
    if (def.terms.empty()) throw ParseError(source, mask_line, "[mask] has no terms");
    s.mask = std::move(def);
    const int need = std::max(min_samples_per_period(lat), s.modes);
    if (s.samples_per_period < need) {
      throw ParseError(source, seen_keys.count("mask.samples") ? seen_keys["mask.samples"] : mask_line,
                       "mask.samples must be >= " + std::to_string(need) + " for " + lat.describe());
    }
  }

  if (k0_entry) {
    const auto tok = split_ws(k0_entry->value);
    if (static_cast<int>(tok.size()) != s.dims) {
      throw ParseError(source, k0_line, "input.k0 needs " + std::to_string(s.dims) + " integer(s)");
    }
    s.k0 = parse_index(*k0_entry, tok, 0, s.dims, source);
    if (!lat.contains(s.k0)) throw ParseError(source, k0_line, "input.k0 lies outside " + lat.describe());
  }
  double norm2 = 0.0;
  for (const Entry& c : coeffs) {
    const auto tok = split_ws(c.value);
    if (static_cast<int>(tok.size()) != s.dims + 2) {
      throw ParseError(source, c.line, "input.coefficient needs " + std::string(s.dims == 1 ? "m" : "mx my") + " re im");
    }
    InputCoefficient ic;
    ic.mode = parse_index(c, tok, 0, s.dims, source);
    if (!lat.contains(ic.mode)) throw ParseError(source, c.line, "coefficient mode lies outside " + lat.describe());
    for (const InputCoefficient& prev : s.input) {
      if (prev.mode == ic.mode) throw ParseError(source, c.line, "duplicate coefficient mode");
    }
    ic.value = {number<double>(c, tok[static_cast<std::size_t>(s.dims)], source),
                number<double>(c, tok[static_cast<std::size_t>(s.dims) + 1], source)};
    norm2 += std::norm(ic.value);
    s.input.push_back(ic);
  }
  if (!coeffs.empty() && !(norm2 > 0.0)) throw ParseError(source, coeffs.front().line, "input coefficients vanish");

  if (s.window < 1 || s.window > lat.max_index()) {
    throw ParseError(source, window_line, "camera.window must lie in [1, " + std::to_string(lat.max_index()) + "]");
  }
  if (s.encoding == EncodeMode::Bolduc) {
    if (!has_mask || s.dims != 1) throw ParseError(source, 0, "bolduc encoding needs a 1D mask scenario");
    if (s.blaze_ratio <= 10) throw ParseError(source, seen_keys["optics.blaze_ratio"], "optics.blaze_ratio must exceed 10");
    if (s.samples_per_carrier < 4) {
      throw ParseError(source, seen_keys["optics.samples_per_carrier"], "optics.samples_per_carrier must be >= 4");
    }
  } else if (has_mask && !s.localized_input()) {
    throw ParseError(source, 0, "a delocalized input needs bolduc encoding");
  }
  if (seen_sections.count("noise") && !s.noise_seed) throw ParseError(source, seen_sections["noise"], "[noise] needs a seed");
  if (s.output_dir.empty()) s.output_dir = s.name;
  return s;
}

std::vector<Entry> entries_of(const Scenario& s) {
  std::vector<Entry> out;
  auto add = [&out](std::string section, std::string key, std::string value) {
    out.push_back({std::move(section), std::move(key), std::move(value), 0});
  };
  add("", "name", s.name);
  add("lattice", "", "");
  add("lattice", "dims", std::to_string(s.dims));
  add("lattice", "modes", std::to_string(s.modes));
  add("lattice", "period", format_double(s.period));
  if (s.mask) {
    add("mask", "", "");
    add("mask", "samples", std::to_string(s.samples_per_period));
    for (const MaskTerm& t : s.mask->terms) add("mask", "term", format_mask_term(t));
  } else if (s.unitary_seed) {
    add("unitary", "", "");
    add("unitary", "seed", std::to_string(*s.unitary_seed));
  }
  add("input", "", "");
  add("input", "k0", index_text(s.k0, s.dims));
  for (const InputCoefficient& c : s.input) {
    add("input", "coefficient",
        index_text(c.mode, s.dims) + " " + format_double(c.value.real()) + " " + format_double(c.value.imag()));
  }
  add("optics", "", "");
  add("optics", "encoding", s.encoding == EncodeMode::Bolduc ? "bolduc" : "phase_only");
  add("optics", "blaze_ratio", std::to_string(s.blaze_ratio));
  add("optics", "samples_per_carrier", std::to_string(s.samples_per_carrier));
  add("optics", "zeroth_order", format_double(s.zeroth_order));
  add("camera", "", "");
  add("camera", "pixels_per_mode", std::to_string(s.pixels_per_mode));
  add("camera", "window", std::to_string(s.window));
  add("camera", "counts_total", std::to_string(s.counts_total));
  if (s.noise_seed) {
    add("noise", "", "");
    add("noise", "seed", std::to_string(*s.noise_seed));
  }
  const RetrievalSettings& r = s.retrieval;
  add("retrieval", "", "");
  add("retrieval", "enabled", r.enabled ? "true" : "false");
  add("retrieval", "runs", std::to_string(r.runs));
  add("retrieval", "iterations", std::to_string(r.iterations));
  add("retrieval", "seed", std::to_string(r.seed));
  if (r.stop_tolerance) add("retrieval", "stop_tolerance", format_double(*r.stop_tolerance));
  add("retrieval", "selection", norm_name(r.selection));
  add("retrieval", "trace", norm_name(r.trace));
  add("retrieval", "threads", std::to_string(r.threads));
  add("output", "", "");
  add("output", "directory", s.output_dir);
  add("output", "indexing", s.indexing == IdlerIndexing::Partner ? "partner" : "physical");
  return out;
}

}  // namespace

GsConfig RetrievalSettings::config() const {
  GsConfig c;
  c.n_runs = runs;
  c.n_iters = iterations;
  c.seed = seed;
  c.stop_tolerance = stop_tolerance;
  c.selection_norm = selection;
  c.trace_norm = trace;
  c.threads = threads;
  return c;
}

bool Scenario::localized_input() const {
  if (input.empty()) return true;
  int nonzero = 0;
  for (const InputCoefficient& c : input) nonzero += c.value != cplx(0.0) ? 1 : 0;
  return nonzero == 1;
}

StateVector Scenario::input_state() const {
  const LatticeSpec lat = lattice();
  if (input.empty()) return StateVector::basis(lat, k0);
  CVector d = CVector::Zero(static_cast<Eigen::Index>(lat.size()));
  for (const InputCoefficient& c : input) d[static_cast<Eigen::Index>(lat.flat(c.mode))] = c.value;
  return StateVector(lat, d).normalized();
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  return build(lex_text(text, source), source);
}

Scenario parse_scenario_json(std::string_view text, const std::string& source) {
  return build(lex_json(text, source), source);
}

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") return parse_scenario_json(text, path.string());
  return parse_scenario(text, path.string());
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  for (const Entry& e : entries_of(s)) {
    if (e.key.empty()) {
      out += "\n[" + e.section + "]\n";
    } else {
      out += e.key + " = " + e.value + "\n";
    }
  }
  return out;
}

std::string serialize_scenario_json(const Scenario& s) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const Entry& e : entries_of(s)) {
    if (e.section.empty()) {
      doc[e.key] = e.value;
    } else if (e.key.empty()) {
      doc[e.section] = nlohmann::ordered_json::object();
    } else if (e.key == "term" || e.key == "coefficient") {
      doc[e.section][e.key].push_back(e.value);
    } else {
      doc[e.section][e.key] = e.value;
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace nlt
