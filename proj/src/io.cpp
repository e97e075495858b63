#include "thf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "thf/errors.hpp"

namespace thf::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ValidationError(field + ": " + msg);
}

double number_at(const json& obj, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required number");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number, got " + std::string(v.type_name()));
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
  return d;
}

std::vector<CircleAtom> parse_circle_atoms(const json& doc) {
  std::vector<CircleAtom> atoms;
  if (!doc.contains("atoms")) return atoms;
  const json& arr = doc.at("atoms");
  if (!arr.is_array()) fail("atoms", "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "atoms[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(p, "expected an object");
    const double loc = number_at(arr[i], "location", p);
    const double mass = number_at(arr[i], "mass", p);
    if (mass < 0.0) fail(p + ".mass", "must be nonnegative");
    atoms.push_back({loc, mass});
  }
  return atoms;
}

std::vector<LineAtom> parse_line_atoms(const json& doc) {
  std::vector<LineAtom> atoms;
  if (!doc.contains("atoms")) return atoms;
  const json& arr = doc.at("atoms");
  if (!arr.is_array()) fail("atoms", "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "atoms[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(p, "expected an object");
    const double loc = number_at(arr[i], "location", p);
    const double mass = number_at(arr[i], "mass", p);
    if (mass < 0.0) fail(p + ".mass", "must be nonnegative");
    atoms.push_back({loc, mass});
  }
  return atoms;
}

TrigDensity parse_trig(const json& density) {
  if (!density.contains("trig_coeffs")) fail("density", "circle support needs \"trig_coeffs\"");
  const json& arr = density.at("trig_coeffs");
  if (!arr.is_array()) fail("density.trig_coeffs", "expected an array");
  std::map<int, cplx> by_k;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "density.trig_coeffs[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(p, "expected an object");
    if (!arr[i].contains("k") || !arr[i].at("k").is_number_integer()) fail(p + ".k", "expected an integer");
    const int k = arr[i].at("k").get<int>();
    if (std::abs(k) > TrigDensity::kMaxDegree) fail(p + ".k", "|k| exceeds the degree cap 64");
    cplx c(number_at(arr[i], "re", p), number_at(arr[i], "im", p, 0.0));
    if (k < 0) c = std::conj(c);
    const int ak = std::abs(k);
    if (auto it = by_k.find(ak); it != by_k.end()) {
      if (it->second != c) fail(p, "conflicts with the conjugate-symmetric entry for |k|=" + std::to_string(ak));
      continue;
    }
    if (k == 0 && c.imag() != 0.0) fail(p + ".im", "c_0 must be real");
    by_k[ak] = c;
  }
  const int top = by_k.empty() ? 0 : by_k.rbegin()->first;
  std::vector<cplx> coeffs(by_k.empty() ? 0 : static_cast<std::size_t>(top) + 1, cplx(0.0, 0.0));
  for (const auto& [k, c] : by_k) coeffs[static_cast<std::size_t>(k)] = c;
  return TrigDensity(std::move(coeffs));
}

JacobiDensity parse_jacobi(const json& density) {
  if (!density.contains("poly_coeffs")) fail("density", "interval support needs \"poly_coeffs\"");
  const json& arr = density.at("poly_coeffs");
  if (!arr.is_array()) fail("density.poly_coeffs", "expected an array");
  std::vector<double> poly;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail("density.poly_coeffs[" + std::to_string(i) + "]", "expected a number");
    poly.push_back(arr[i].get<double>());
  }
  const double alpha = number_at(density, "alpha", "density", 0.0);
  const double beta = number_at(density, "beta", "density", 0.0);
  if (!(alpha > -1.0)) fail("density.alpha", "must exceed -1");
  if (!(beta > -1.0)) fail("density.beta", "must exceed -1");
  return JacobiDensity(std::move(poly), alpha, beta);
}

std::string csv_line_error(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_cell(const std::string& cell, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(csv_line_error(line, "cannot parse number '" + cell + "'"));
  }
}

json evidence_json(const Verdict& v) {
  json ev = json::object();
  for (const auto& [k, x] : v.evidence) ev[k] = std::isfinite(x) ? json(x) : json(format_double(x));
  for (const auto& [k, xs] : v.series) {
    json arr = json::array();
    for (double x : xs) arr.push_back(std::isfinite(x) ? json(x) : json(format_double(x)));
    ev[k] = arr;
  }
  return ev;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Measure parse_measure(const json& doc) {
  if (!doc.is_object()) fail("(root)", "expected a JSON object");
  if (doc.contains("schema_version")) {
    const json& v = doc.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
      fail("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
    }
  }
  if (!doc.contains("support")) fail("support", "missing");
  const json& support = doc.at("support");
  const json empty = json::object();
  const json& density = doc.contains("density") ? doc.at("density") : empty;
  if (!density.is_object()) fail("density", "expected an object");

  try {
    if (support.is_string()) {
      if (support.get<std::string>() != "circle") fail("support", "expected \"circle\" or {\"interval\": [a, b]}");
      TrigDensity t = density.empty() ? TrigDensity() : parse_trig(density);
      return CircleMeasure(std::move(t), parse_circle_atoms(doc));
    }
    if (!support.is_object() || !support.contains("interval")) {
      fail("support", "expected \"circle\" or {\"interval\": [a, b]}");
    }
    const json& iv = support.at("interval");
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      fail("support.interval", "expected [a, b] with numeric endpoints");
    }
    JacobiDensity d = density.empty() ? JacobiDensity() : parse_jacobi(density);
    return LineMeasure({iv[0].get<double>(), iv[1].get<double>()}, std::move(d), parse_line_atoms(doc));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed measure: ") + e.what());
  }
}

Measure parse_measure_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("JSON syntax error: ") + e.what());
  }
  return parse_measure(doc);
}

Measure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open measure file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_measure_text(ss.str());
}

json measure_to_json(const Measure& m) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  if (const auto* c = std::get_if<CircleMeasure>(&m)) {
    doc["support"] = "circle";
    json coeffs = json::array();
    const auto cs = c->density().coefficients();
    for (std::size_t k = 0; k < cs.size(); ++k) coeffs.push_back({{"k", k}, {"re", cs[k].real()}, {"im", cs[k].imag()}});
    doc["density"] = {{"trig_coeffs", coeffs}};
    json atoms = json::array();
    for (const CircleAtom& a : c->atoms()) atoms.push_back({{"location", a.theta}, {"mass", a.mass}});
    doc["atoms"] = atoms;
  } else {
    const LineMeasure& l = std::get<LineMeasure>(m);
    doc["support"] = {{"interval", {l.support().a, l.support().b}}};
    const auto p = l.density().poly();
    doc["density"] = {{"poly_coeffs", std::vector<double>(p.begin(), p.end())},
                      {"alpha", l.density().alpha()},
                      {"beta", l.density().beta()}};
    json atoms = json::array();
    for (const LineAtom& a : l.atoms()) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
    doc["atoms"] = atoms;
  }
  return doc;
}

void write_coefficients_csv(std::ostream& out, const CoefficientSequence& c) {
  out << "# schema_version=" << kSchemaVersion << "\n";
  if (c.kind() == StructureKind::toeplitz) {
    out << "n,re,im\n";
    const long top = static_cast<long>(c.max_index());
    for (long n = -top; n <= top; ++n) {
      const cplx v = c.t(n);
      out << n << "," << format_double(v.real()) << "," << format_double(v.imag()) << "\n";
    }
  } else {
    out << "n,value\n";
    const auto h = c.hankel_values();
    for (std::size_t n = 0; n < h.size(); ++n) out << n << "," << format_double(h[n]) << "\n";
  }
}

CoefficientSequence read_coefficients_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::map<long, cplx> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# schema_version=";
      if (line.rfind(key, 0) == 0 && line.substr(key.size()) != std::to_string(kSchemaVersion)) {
        throw ValidationError(csv_line_error(lineno, "unsupported schema version"));
      }
      continue;
    }
    if (header.empty()) {
      header = split_csv(line);
      if (header != std::vector<std::string>{"n", "re", "im"} && header != std::vector<std::string>{"n", "value"}) {
        throw ValidationError(csv_line_error(lineno, "expected header 'n,re,im' or 'n,value'"));
      }
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ValidationError(csv_line_error(lineno, "expected " + std::to_string(header.size()) + " columns"));
    }
    const double nd = parse_cell(cells[0], lineno);
    if (nd != std::floor(nd)) throw ValidationError(csv_line_error(lineno, "index must be an integer"));
    const long n = static_cast<long>(nd);
    const cplx v(parse_cell(cells[1], lineno), header.size() == 3 ? parse_cell(cells[2], lineno) : 0.0);
    if (!rows.emplace(n, v).second) throw ValidationError(csv_line_error(lineno, "duplicate index"));
    if (header.size() == 2 && n < 0) throw ValidationError(csv_line_error(lineno, "Hankel index must be >= 0"));
  }
  if (header.empty()) throw ValidationError("coefficient CSV has no header");
  if (rows.empty()) throw ValidationError("coefficient CSV has no rows");

  if (header.size() == 2) {
    std::vector<double> h;
    for (const auto& [n, v] : rows) {
      if (n != static_cast<long>(h.size())) throw ValidationError("Hankel rows must cover 0..L-1 without gaps");
      h.push_back(v.real());
    }
    return CoefficientSequence::hankel(std::move(h));
  }
  const long top = rows.rbegin()->first;
  std::vector<cplx> t;
  for (long n = 0; n <= top; ++n) {
    auto pos = rows.find(n);
    auto neg = rows.find(-n);
    if (pos == rows.end()) throw ValidationError("Toeplitz rows missing index " + std::to_string(n));
    if (neg == rows.end()) throw ValidationError("Toeplitz rows missing index " + std::to_string(-n));
    if (neg->second != std::conj(pos->second)) {
      throw ValidationError("Toeplitz rows violate t_{-n} = conj(t_n) at n=" + std::to_string(n));
    }
    t.push_back(pos->second);
  }
  if (static_cast<long>(rows.size()) != 2 * top + 1) throw ValidationError("Toeplitz rows must cover -N..N");
  return CoefficientSequence::toeplitz(std::move(t));
}

CoefficientSequence load_coefficients_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coefficient file " + path);
  return read_coefficients_csv(in);
}

json to_json(const SpectralReport& r) {
  return {{"schema_version", kSchemaVersion}, {"N", r.n},
          {"lambda_min", r.lambda_min},       {"lambda_max", r.lambda_max},
          {"residual", r.residual_norm},      {"iterations", r.iterations},
          {"converged", r.converged}};
}

json to_json(const DiagnosticReport& r) {
  json verdicts = json::object();
  for (const auto& [name, v] : r.verdicts) {
    verdicts[name] = {{"holds", v.holds}, {"required", v.required}, {"evidence", evidence_json(v)}, {"note", v.note}};
  }
  return {{"schema_version", kSchemaVersion}, {"overall", r.overall}, {"verdicts", verdicts}};
}

json to_json(const BridgeReport& r) {
  json per = json::array();
  for (const BridgePoint& p : r.points) {
    per.push_back({{"lambda", p.lambda},
                   {"power_side", {p.power_side.real(), p.power_side.imag()}},
                   {"laplace_side", {p.laplace_side.real(), p.laplace_side.imag()}},
                   {"residual", p.residual}});
  }
  return {{"schema_version", kSchemaVersion}, {"max_residual", r.max_residual}, {"per_lambda", per}};
}

std::string render_table(const DiagnosticReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(28) << "criterion" << std::setw(8) << "holds" << std::setw(10) << "required"
      << "evidence\n";
  for (const auto& [name, v] : r.verdicts) {
    out << std::setw(28) << name << std::setw(8) << (v.holds ? "yes" : "no") << std::setw(10)
        << (v.required ? "yes" : "no");
    bool first = true;
    for (const auto& [k, x] : v.evidence) {
      out << (first ? "" : ", ") << k << "=" << format_double(x);
      first = false;
    }
    out << "\n";
  }
  out << "overall: " << (r.overall ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace thf::io
