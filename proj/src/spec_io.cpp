#include "flockwave/spec_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flockwave/error.hpp"

namespace flockwave {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error("spec", path + ": " + what);
}

std::optional<std::int64_t> to_int64(std::string_view digits) {
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || end != digits.data() + digits.size()) return std::nullopt;
  return value;
}

std::optional<Rational> exact_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::string mantissa;
  int scale = 0;
  bool seen_digit = false;
  bool in_fraction = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      seen_digit = true;
      if (in_fraction) ++scale;
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return std::nullopt;
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    auto e = text.substr(i);
    if (!e.empty() && e.front() == '+') e.remove_prefix(1);
    auto parsed = to_int64(e);
    if (!parsed || std::abs(*parsed) > 18) return std::nullopt;
    exponent = static_cast<int>(*parsed);
    i = text.size();
  }
  if (i != text.size()) return std::nullopt;
  while (mantissa.size() > 1 && mantissa.front() == '0') mantissa.erase(mantissa.begin());
  if (mantissa.size() > 18) return std::nullopt;
  auto m = to_int64(mantissa);
  if (!m) return std::nullopt;
  const int power = exponent - scale;
  if (std::abs(power) > 18) return std::nullopt;
  std::int64_t ten = 1;
  for (int k = 0; k < std::abs(power); ++k) ten *= 10;
  Rational r = power >= 0 ? Rational(*m) * Rational(ten) : Rational(*m, ten);
  return negative ? -r : r;
}

ParsedNumber number_at(const json& node, const std::string& path) {
  if (node.is_number_integer()) {
    const auto v = node.get<std::int64_t>();
    return {static_cast<double>(v), Rational(v)};
  }
  if (node.is_number()) return {node.get<double>(), std::nullopt};
  if (node.is_string()) {
    try {
      return parse_number(node.get<std::string>());
    } catch (const Error& e) {
      fail(path, "cannot parse number '" + node.get<std::string>() + "'");
    }
  }
  fail(path, "expected a number or a numeric string");
}

const json& field(const json& doc, const std::string& name) {
  auto it = doc.find(name);
  if (it == doc.end()) fail(name, "missing field");
  return *it;
}

Stencil stencil_at(const json& doc, const std::string& name) {
  const json& node = field(doc, name);
  if (!node.is_array() || node.size() != Stencil::kSize) {
    fail(name, "expected an array of 5 coefficients (rho_-2, rho_-1, rho_0, rho_1, rho_2)");
  }
  Stencil::Values values{};
  Stencil::ExactValues exact{};
  bool all_exact = true;
  for (std::size_t i = 0; i < Stencil::kSize; ++i) {
    const auto parsed = number_at(node[i], name + "[" + std::to_string(i) + "]");
    values[i] = parsed.value;
    if (parsed.exact) {
      exact[i] = *parsed.exact;
    } else {
      all_exact = false;
    }
  }
  return all_exact ? Stencil(exact) : Stencil(values);
}

json stencil_json(const Stencil& s) {
  json out = json::array();
  if (const auto& exact = s.exact()) {
    for (const auto& r : *exact) {
      if (r.denominator() == 1) {
        out.push_back(r.numerator());
      } else {
        out.push_back(std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()));
      }
    }
  } else {
    for (double v : s.values()) out.push_back(v);
  }
  return out;
}

}  // namespace

ParsedNumber parse_number(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error("spec", "empty number");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = to_int64(text.front() == '+' ? text.substr(1, slash - 1) : text.substr(0, slash));
    auto den = to_int64(text.substr(slash + 1));
    if (!num || !den) throw Error("spec", "malformed rational '" + std::string(text) + "'");
    if (*den == 0) throw Error("spec", "zero denominator in '" + std::string(text) + "'");
    const Rational r(*num, *den);
    return {boost::rational_cast<double>(r), r};
  }
  if (auto r = exact_decimal(text)) return {boost::rational_cast<double>(*r), r};

  std::string owned(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(owned, &used);
  } catch (const std::exception&) {
    throw Error("spec", "malformed number '" + owned + "'");
  }
  if (used != owned.size()) throw Error("spec", "malformed number '" + owned + "'");
  return {value, std::nullopt};
}

FlockSpec parse_spec_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("spec", std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw Error("spec", "malformed document: top level must be an object");

  const double g_x = number_at(field(doc, "g_x"), "g_x").value;
  const double g_v = number_at(field(doc, "g_v"), "g_v").value;
  Stencil rho_x = stencil_at(doc, "rho_x");
  Stencil rho_v = stencil_at(doc, "rho_v");

  FlockSpec spec;
  spec.config = CouplingConfig(g_x, g_v, std::move(rho_x), std::move(rho_v));

  const json& n = field(doc, "N");
  if (!n.is_number_integer()) fail("N", "expected an integer");
  spec.N = n.get<int>();
  spec.delta = number_at(field(doc, "delta"), "delta").value;
  spec.v0 = number_at(field(doc, "v0"), "v0").value;
  const json& b = field(doc, "boundary");
  if (!b.is_string()) fail("boundary", "expected a string");
  try {
    spec.boundary = boundary_from_string(b.get<std::string>());
  } catch (const Error& e) {
    fail("boundary", e.what());
  }

  return spec;
}

FlockSpec parse_spec(std::string_view text) {
  FlockSpec spec = parse_spec_document(text);
  const auto report = validate_config(spec.config);
  if (!report.valid()) {
    const auto& v = report.violations.front();
    fail(v.field, v.constraint + " constraint violated (residual " + std::to_string(v.residual) + ")");
  }
  if (spec.N <= 4) fail("N", "must be > 4");
  if (!(spec.delta >= 0.0)) fail("delta", "must be >= 0");
  return spec;
}

std::string serialize_spec(const FlockSpec& spec) {
  json doc;
  doc["g_x"] = spec.config.g_x();
  doc["g_v"] = spec.config.g_v();
  doc["rho_x"] = stencil_json(spec.config.rho_x());
  doc["rho_v"] = stencil_json(spec.config.rho_v());
  doc["N"] = spec.N;
  doc["delta"] = spec.delta;
  doc["v0"] = spec.v0;
  doc["boundary"] = std::string(to_string(spec.boundary));
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

FlockSpec load_spec(const std::string& path) { return parse_spec(read_text_file(path)); }

}  // namespace flockwave
