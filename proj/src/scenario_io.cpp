#include "stratcomm/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stratcomm/binary_example.hpp"
#include "stratcomm/error.hpp"

namespace stratcomm {

namespace {

using json = nlohmann::ordered_json;

const char* const kAxes[] = {"u", "z", "x", "y", "v"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw Error(ErrorKind::kValidation, where + ": unknown key \"" + it.key() + "\"");
  }
  for (const auto& key : allowed) {
    if (!obj.contains(key)) throw Error(ErrorKind::kValidation, where + ": missing key \"" + key + "\"");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorKind::kValidation, where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::kValidation, where + ": not finite");
  return v;
}

const json& array_of(const json& j, std::size_t size, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::kValidation, where + ": expected an array");
  if (j.size() != size)
    throw Error(ErrorKind::kDimensionMismatch,
                where + ": expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  return j;
}

std::vector<double> matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& table) {
  array_of(j, rows, table);
  std::vector<double> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string where = table + " row " + std::to_string(r);
    array_of(j[r], cols, where);
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = number(j[r][c], where + " column " + std::to_string(c));
      if (v < 0.0) throw Error(ErrorKind::kValidation, where + " column " + std::to_string(c) + ": negative probability");
      out.push_back(v);
    }
  }
  return out;
}

UtilityTable utility(const json& j, std::size_t nu, std::size_t nz, std::size_t nv, const std::string& table) {
  array_of(j, nu, table);
  std::vector<double> out;
  out.reserve(nu * nz * nv);
  for (std::size_t u = 0; u < nu; ++u) {
    const std::string wu = table + "[" + std::to_string(u) + "]";
    array_of(j[u], nz, wu);
    for (std::size_t z = 0; z < nz; ++z) {
      const std::string wz = wu + "[" + std::to_string(z) + "]";
      array_of(j[u][z], nv, wz);
      for (std::size_t v = 0; v < nv; ++v) out.push_back(number(j[u][z][v], wz + "[" + std::to_string(v) + "]"));
    }
  }
  return UtilityTable(nu, nz, nv, std::move(out));
}

template <class F>
auto with_context(const std::string& table, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), table + ": " + e.what());
  }
}

Scenario from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::kValidation, "scenario: expected a JSON object");
  reject_unknown(doc, {"alphabets", "source", "channel", "utility_encoder", "utility_decoder"}, "scenario");
  const json& a = doc["alphabets"];
  if (!a.is_object()) throw Error(ErrorKind::kValidation, "alphabets: expected an object");
  reject_unknown(a, {"u", "z", "x", "y", "v"}, "alphabets");

  Alphabet alph[5];
  for (int k = 0; k < 5; ++k) {
    const json& syms = a[kAxes[k]];
    const std::string where = std::string("alphabets.") + kAxes[k];
    if (!syms.is_array()) throw Error(ErrorKind::kValidation, where + ": expected an array of strings");
    std::vector<std::string> labels;
    for (const auto& sym : syms) {
      if (!sym.is_string()) throw Error(ErrorKind::kValidation, where + ": symbols must be strings");
      labels.push_back(sym.get<std::string>());
    }
    alph[k] = with_context(where, [&] { return Alphabet(kAxes[k], std::move(labels)); });
  }
  ScenarioAlphabets alphabets{alph[0], alph[1], alph[2], alph[3], alph[4]};
  const std::size_t nu = alphabets.u.size(), nz = alphabets.z.size();
  const std::size_t nx = alphabets.x.size(), ny = alphabets.y.size(), nv = alphabets.v.size();

  std::vector<double> src = matrix(doc["source"], nu, nz, "source");
  double total = 0.0;
  for (double v : src) total += v;
  if (std::abs(total - 1.0) > kProbTol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", total);
    throw Error(ErrorKind::kValidation, std::string("source: total mass ") + buf + " is not 1");
  }
  Joint source = with_context("source", [&] { return Joint({nu, nz}, std::move(src)); });
  std::vector<double> ch = matrix(doc["channel"], nx, ny, "channel");
  Kernel channel = with_context("channel", [&] { return Kernel(nx, ny, std::move(ch)); });
  UtilityTable enc = utility(doc["utility_encoder"], nu, nz, nv, "utility_encoder");
  UtilityTable dec = utility(doc["utility_decoder"], nu, nz, nv, "utility_decoder");
  return Scenario(std::move(alphabets), std::move(source), std::move(channel), std::move(enc), std::move(dec));
}

json to_json(const Scenario& s) {
  json doc;
  json alph = json::object();
  const Alphabet* axes[] = {&s.alphabets().u, &s.alphabets().z, &s.alphabets().x, &s.alphabets().y,
                            &s.alphabets().v};
  for (int k = 0; k < 5; ++k) alph[kAxes[k]] = axes[k]->symbols();
  doc["alphabets"] = alph;

  json src = json::array();
  for (std::size_t u = 0; u < s.nu(); ++u) {
    json row = json::array();
    for (std::size_t z = 0; z < s.nz(); ++z) row.push_back(s.source().at(u, z));
    src.push_back(row);
  }
  doc["source"] = src;

  json ch = json::array();
  for (std::size_t x = 0; x < s.channel().from_size(); ++x) {
    const auto r = s.channel().row(x);
    ch.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["channel"] = ch;

  auto util = [&](const UtilityTable& t) {
    json out = json::array();
    for (std::size_t u = 0; u < t.nu(); ++u) {
      json zs = json::array();
      for (std::size_t z = 0; z < t.nz(); ++z) {
        json vs = json::array();
        for (std::size_t v = 0; v < t.nv(); ++v) vs.push_back(t(u, z, v));
        zs.push_back(vs);
      }
      out.push_back(zs);
    }
    return out;
  };
  doc["utility_encoder"] = util(s.utility_encoder());
  doc["utility_decoder"] = util(s.utility_decoder());
  return doc;
}

}  // namespace

Scenario scenario_from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("scenario: ") + e.what());
  }
  return from_json(doc);
}

Scenario load_scenario(const std::string& path_or_builtin) {
  if (path_or_builtin == kBuiltinPaperIv) return paper_iv_scenario();
  std::ifstream in(path_or_builtin, std::ios::binary);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open scenario file '" + path_or_builtin + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_string(buf.str());
}

std::string scenario_to_string(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

std::string scenario_canonical(const Scenario& s) { return to_json(s).dump(); }

std::string scenario_digest(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario_canonical(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stratcomm
