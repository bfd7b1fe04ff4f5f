#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "greenq/gram.hpp"
#include "greenq/interpolation.hpp"
#include "greenq/jordan_wigner.hpp"
#include "greenq/spectral.hpp"

namespace greenq {

/// 17 significant digits: enough to reproduce any double bit-exactly.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw validation_error("bad number '" + text + "'");
  return v;
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) out.push_back(token);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t lo = s.find_first_not_of(" \t\r\n");
  if (lo == std::string::npos) return "";
  std::size_t hi = s.find_last_not_of(" \t\r\n");
  return s.substr(lo, hi - lo + 1);
}

// key=value lines of one section, preserving repetitions and order
struct KvSection {
  std::vector<std::pair<std::string, std::string>> entries;

  std::string get(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return v;
    throw validation_error("missing key '" + key + "'");
  }
  std::string get_or(const std::string& key, const std::string& fallback) const {
    for (const auto& [k, v] : entries)
      if (k == key) return v;
    return fallback;
  }
  std::vector<std::string> all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
      if (k == key) out.push_back(v);
    return out;
  }
};

inline KvSection parse_section(const std::string& text, const std::string& name) {
  KvSection section;
  bool inside = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      inside = (line == "[" + name + "]");
      continue;
    }
    if (!inside) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw validation_error("bad config line '" + line + "'");
    section.entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (section.entries.empty()) throw validation_error("section [" + name + "] not found or empty");
  return section;
}

inline std::string tuple_token(const IndexTuple& tuple) {
  std::string out;
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    if (k) out += ',';
    out += 'i' + std::to_string(tuple[k]);
  }
  return out;
}

inline IndexTuple parse_tuple_token(const std::string& token) {
  IndexTuple tuple;
  for (const std::string& part : split(token, ',')) {
    const std::string t = trim(part);
    if (t.size() < 2 || t[0] != 'i') throw validation_error("bad index token '" + t + "'");
    tuple.push_back(std::stoi(t.substr(1)));
  }
  return tuple;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// deformation spec config
// ---------------------------------------------------------------------------

/// Flat key-value text form of a spec. q entries appear once per (i, j) pair
/// of the diagonal plus upper triangle, as `q = i j re im`.
inline std::string write_spec(const DeformationSpec& spec) {
  std::ostringstream os;
  os << "[spec]\n";
  os << "family = " << family_name(spec.family()) << "\n";
  os << "order = " << spec.order() << "\n";
  os << "sites = " << spec.sites() << "\n";
  if (spec.family() == Family::Anyon) os << "lambda = " << fmt_double(spec.lambda()) << "\n";
  if (spec.family() == Family::Speicher) {
    os << "epsilon = " << spec.epsilon() << "\n";
    os << "speicher_q = " << fmt_double(spec.speicher_q()) << "\n";
  }
  for (int i = 0; i < spec.sites(); ++i)
    for (int j = i; j < spec.sites(); ++j)
      os << "q = " << i << ' ' << j << ' ' << fmt_double(spec.q(i, j).real()) << ' '
         << fmt_double(spec.q(i, j).imag()) << "\n";
  return os.str();
}

inline DeformationSpec parse_spec(const std::string& text) {
  const auto section = detail::parse_section(text, "spec");
  const Family family = family_from_name(section.get("family"));
  const int order = std::stoi(section.get("order"));
  const int sites = std::stoi(section.get("sites"));
  if (sites < 1) throw validation_error("sites must be positive");
  std::vector<cplx> q(static_cast<std::size_t>(sites) * sites, cplx(0.0, 0.0));
  for (const std::string& line : section.all("q")) {
    std::istringstream in(line);
    int i, j;
    std::string re, im;
    if (!(in >> i >> j >> re >> im)) throw validation_error("bad q line '" + line + "'");
    if (i < 0 || j < 0 || i >= sites || j >= sites)
      throw validation_error("q indices out of range in '" + line + "'");
    const cplx v(parse_double(re), parse_double(im));
    q[static_cast<std::size_t>(i) * sites + j] = v;
    if (i != j) q[static_cast<std::size_t>(j) * sites + i] = std::conj(v);
  }
  const double lambda = parse_double(section.get_or("lambda", "0"));
  const int epsilon = std::stoi(section.get_or("epsilon", "1"));
  const double speicher_q = parse_double(section.get_or("speicher_q", "0"));
  return DeformationSpec(family, order, sites, std::move(q), lambda, epsilon, speicher_q);
}

inline std::string spec_hash(const DeformationSpec& spec) { return hex64(fnv1a64(write_spec(spec))); }

// ---------------------------------------------------------------------------
// gram reports
// ---------------------------------------------------------------------------

/// Self-contained matrix report: enough to reconstruct the numbers without
/// the spec, which is referenced by hash.
struct GramReport {
  std::string spec_hash;
  int order = 1;
  int particles = 0;
  std::vector<IndexTuple> basis;
  std::vector<cplx> entries;  // row-major, full matrix

  cplx entry(std::size_t r, std::size_t c) const { return entries[r * basis.size() + c]; }
};

inline GramReport make_report(const GramMatrix& g) {
  GramReport report;
  report.spec_hash = spec_hash(g.spec());
  report.order = g.spec().order();
  report.particles = static_cast<int>(g.basis().base.size());
  report.basis = g.basis().elements;
  report.entries.reserve(g.size() * g.size());
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < g.size(); ++c) report.entries.push_back(g.entry(r, c));
  return report;
}

inline std::string write_gram_text(const GramReport& report) {
  std::ostringstream os;
  os << "[gram]\n";
  os << "spec_hash = " << report.spec_hash << "\n";
  os << "order = " << report.order << "\n";
  os << "n = " << report.particles << "\n";
  for (const auto& tuple : report.basis) os << "basis = " << detail::tuple_token(tuple) << "\n";
  for (std::size_t r = 0; r < report.basis.size(); ++r)
    for (std::size_t c = 0; c < report.basis.size(); ++c)
      os << "entry = " << r << ' ' << c << ' ' << fmt_double(report.entry(r, c).real()) << ' '
         << fmt_double(report.entry(r, c).imag()) << "\n";
  return os.str();
}

inline std::string write_gram_csv(const GramReport& report) {
  std::ostringstream os;
  os << "# gram\n";
  os << "# spec_hash=" << report.spec_hash << "\n";
  os << "# order=" << report.order << "\n";
  os << "# n=" << report.particles << "\n";
  os << "# basis=";
  for (std::size_t k = 0; k < report.basis.size(); ++k) {
    if (k) os << ';';
    os << detail::tuple_token(report.basis[k]);
  }
  os << "\nrow,col,re,im\n";
  for (std::size_t r = 0; r < report.basis.size(); ++r)
    for (std::size_t c = 0; c < report.basis.size(); ++c)
      os << r << ',' << c << ',' << fmt_double(report.entry(r, c).real()) << ','
         << fmt_double(report.entry(r, c).imag()) << "\n";
  return os.str();
}

inline GramReport parse_gram_text(const std::string& text) {
  const auto section = detail::parse_section(text, "gram");
  GramReport report;
  report.spec_hash = section.get("spec_hash");
  report.order = std::stoi(section.get("order"));
  report.particles = std::stoi(section.get("n"));
  for (const std::string& token : section.all("basis"))
    report.basis.push_back(detail::parse_tuple_token(token));
  if (report.basis.empty()) throw validation_error("gram report lists no basis tuples");
  report.entries.assign(report.basis.size() * report.basis.size(), cplx(0.0, 0.0));
  for (const std::string& line : section.all("entry")) {
    std::istringstream in(line);
    std::size_t r, c;
    std::string re, im;
    if (!(in >> r >> c >> re >> im)) throw validation_error("bad entry line '" + line + "'");
    if (r >= report.basis.size() || c >= report.basis.size())
      throw validation_error("entry indices out of range");
    report.entries[r * report.basis.size() + c] = cplx(parse_double(re), parse_double(im));
  }
  return report;
}

inline GramReport parse_gram_csv(const std::string& text) {
  GramReport report;
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = detail::trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "spec_hash") report.spec_hash = value;
      if (key == "order") report.order = std::stoi(value);
      if (key == "n") report.particles = std::stoi(value);
      if (key == "basis")
        for (const std::string& token : detail::split(value, ';'))
          report.basis.push_back(detail::parse_tuple_token(token));
      continue;
    }
    if (!seen_header) {
      if (line != "row,col,re,im") throw validation_error("bad csv header '" + line + "'");
      seen_header = true;
      if (report.basis.empty()) throw validation_error("csv gram report lists no basis tuples");
      report.entries.assign(report.basis.size() * report.basis.size(), cplx(0.0, 0.0));
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 4) throw validation_error("bad csv row '" + line + "'");
    const auto r = static_cast<std::size_t>(std::stoul(fields[0]));
    const auto c = static_cast<std::size_t>(std::stoul(fields[1]));
    if (r >= report.basis.size() || c >= report.basis.size())
      throw validation_error("entry indices out of range");
    report.entries[r * report.basis.size() + c] =
        cplx(parse_double(fields[2]), parse_double(fields[3]));
  }
  if (!seen_header) throw validation_error("csv gram report has no data header");
  return report;
}

/// Detects the format by the first non-blank line.
inline GramReport parse_gram(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line == "[gram]") return parse_gram_text(text);
    return parse_gram_csv(text);
  }
  throw validation_error("empty gram report");
}

// ---------------------------------------------------------------------------
// scan and coefficient reports
// ---------------------------------------------------------------------------

inline std::string write_scan_csv(const ScanReport& report) {
  std::ostringstream os;
  os << "param,min_eig,rank\n";
  for (const auto& row : report.rows)
    os << fmt_double(row.param) << ',' << fmt_double(row.min_eig) << ',' << row.rank << "\n";
  return os.str();
}

inline std::string write_jw_csv(const ResidualReport& report, double lambda, double mu) {
  std::ostringstream os;
  os << "lambda,mu,relation,i,alpha,j,beta,residual\n";
  for (const auto& row : report.rows)
    os << fmt_double(lambda) << ',' << fmt_double(mu) << ',' << relation_name(row.relation) << ','
       << row.i << ',' << row.alpha + 1 << ',' << row.j << ',' << row.beta + 1 << ','
       << fmt_double(row.residual) << "\n";
  return os.str();
}

inline std::string write_coeff_text(const CoeffReport& report, const DeformationSpec& spec) {
  std::ostringstream os;
  os << "[coeff]\n";
  os << "order = " << report.order << "\n";
  if (spec.scalar_q())
    os << "q = " << fmt_double(spec.scalar_q_value()) << "\n";
  else
    os << "q_hash = " << spec_hash(spec) << "\n";
  os << "elements = " << report.element_count << "\n";
  os << "residual_norm = " << fmt_double(report.residual_norm) << "\n";
  os << "spot_check_max = " << fmt_double(report.spot_check_max) << "\n";
  if (report.scalar_mode) {
    os << "extracted = " << fmt_double(report.extracted.real()) << ' '
       << fmt_double(report.extracted.imag()) << "\n";
    os << "closed_form = " << fmt_double(report.closed_form.real()) << ' '
       << fmt_double(report.closed_form.imag()) << "\n";
  } else {
    for (const auto& kc : report.per_k)
      os << "k_coeff = " << kc.k << ' ' << fmt_double(kc.extracted.real()) << ' '
         << fmt_double(kc.extracted.imag()) << ' ' << fmt_double(kc.closed_form.real()) << ' '
         << fmt_double(kc.closed_form.imag()) << "\n";
  }
  return os.str();
}

}  // namespace greenq
