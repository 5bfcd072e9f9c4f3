#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "typel/cli.hpp"

namespace typel::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("malformed number '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const std::string_view t = trim(text);
  if (t.empty()) throw ConfigError("empty complex literal");
  if (t.back() != 'i' && t.back() != 'j') return {parse_real(t, text), 0.0};
  const std::string_view body = t.substr(0, t.size() - 1);
  std::size_t split_at = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  const auto imag_of = [&](std::string_view s) {
    s = trim(s);
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s, text);
  };
  if (split_at == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split_at), text), imag_of(body.substr(split_at))};
}

namespace {

std::vector<Mobius> parse_mobius_group(std::string_view s) {
  s = trim(s);
  if (s.rfind("classical-schottky", 0) == 0) {
    std::string_view rest = trim(s.substr(std::string_view("classical-schottky").size()));
    double k = 16.0;
    if (!rest.empty()) {
      if (rest.front() != '(' || rest.back() != ')')
        throw ConfigError("expected classical-schottky or classical-schottky(<k>)");
      k = parse_real(rest.substr(1, rest.size() - 2), s);
    }
    return classical_schottky_pair(k);
  }
  std::vector<Mobius> out;
  for (auto item : split(s, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != 4) throw ConfigError("Mobius generator needs four coefficients a,b,c,d: '" + std::string(item) + "'");
    out.emplace_back(parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2]),
                     parse_complex(parts[3]));
  }
  if (out.empty()) throw ConfigError("Mobius group needs at least one generator");
  return out;
}

std::vector<Complex> parse_complex_list(std::string_view s) {
  std::vector<Complex> out;
  for (auto item : split(s, ',')) out.push_back(parse_complex(item));
  return out;
}

}  // namespace

LoadedGroup load_preset(std::string_view preset) {
  preset = trim(preset);
  const auto colon = preset.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError("preset '" + std::string(preset) + "' needs the form <kind>:<parameters>");
  const std::string_view kind = trim(preset.substr(0, colon));
  const std::string_view body = trim(preset.substr(colon + 1));
  LoadedGroup g;
  g.description = std::string(preset);
  try {
    if (kind == "twisted-cubic" || kind == "segre") {
      g.mobius = parse_mobius_group(body);
      const bool tc = kind == "twisted-cubic";
      g.spec = tc ? twisted_cubic_group(g.mobius) : segre_group(g.mobius);
      g.kind = tc ? LoadedGroup::Kind::TwistedCubic : LoadedGroup::Kind::Segre;
    } else if (kind == "schottky") {
      const auto halves = split(body, ';');
      if (halves.size() != 2) throw ConfigError("schottky preset needs <diag A>;<diag B>");
      const auto a = parse_complex_list(halves[0]);
      const auto b = parse_complex_list(halves[1]);
      if (a.size() != b.size()) throw ConfigError("schottky diagonals must have equal length");
      CVector da(static_cast<Eigen::Index>(a.size())), db(static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < a.size(); ++i) {
        da(static_cast<Eigen::Index>(i)) = a[i];
        db(static_cast<Eigen::Index>(i)) = b[i];
      }
      g.spec = schottky_group(CMatrix(da.asDiagonal()), CMatrix(db.asDiagonal()));
      g.kind = LoadedGroup::Kind::Schottky;
    } else if (kind == "cone") {
      const auto v = parse_complex_list(body);
      if (v.size() != 4) throw ConfigError("cone preset needs alpha,p,q,r");
      g.spec = cone_example(v[0], v[1], v[2], v[3]).spec;
      g.kind = LoadedGroup::Kind::Cone;
    } else if (kind == "klein") {
      const auto parts = split(body, '|');
      if (parts.size() != 3) throw ConfigError("klein preset needs <preset>|<preset>|<r>");
      const LoadedGroup f1 = load_preset(parts[0]);
      const LoadedGroup f2 = load_preset(parts[1]);
      g.spec = klein_combine(f1.spec, f2.spec, parse_real(parts[2], parts[2])).spec;
      g.kind = LoadedGroup::Kind::Klein;
    } else {
      throw ConfigError("unknown preset kind '" + std::string(kind) + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("preset '" + std::string(preset) + "': " + e.what());
  }
  return g;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + message);
}

Complex entry_from_json(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) {
    try {
      return parse_complex(v.get<std::string>());
    } catch (const ConfigError& e) {
      fail(path, e.what());
    }
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(path, "expected a number, a [re, im] pair or a complex string");
}

CMatrix matrix_from_json(const json& v, const std::string& path, Eigen::Index size) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  if (static_cast<Eigen::Index>(v.size()) != size)
    fail(path, "expected " + std::to_string(size) + " rows, found " + std::to_string(v.size()));
  CMatrix m(size, size);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_path = path + "/" + std::to_string(i);
    if (!v[i].is_array() || static_cast<Eigen::Index>(v[i].size()) != size)
      fail(row_path, "expected a row of " + std::to_string(size) + " entries");
    for (std::size_t j = 0; j < v[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          entry_from_json(v[i][j], row_path + "/" + std::to_string(j));
  }
  if (!m.allFinite()) fail(path, "matrix has non-finite entries");
  return m;
}

int int_from_json(const json& v, const std::string& path, int lo) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo) fail(path, "must be >= " + std::to_string(lo));
  return static_cast<int>(x);
}

std::size_t line_col(std::string_view text, std::size_t byte, std::size_t& col) {
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  std::size_t line = 1;
  col = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return line;
}

}  // namespace

LoadedGroup parse_config(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t col = 0;
    const std::size_t line = line_col(text, e.byte, col);
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      (pos == std::string::npos ? what : what.substr(pos)));
  }
  if (!doc.is_object()) fail("", "top level must be an object");

  static const std::vector<std::string> known = {"n", "preset", "generators", "structure", "factor_sizes",
                                                 "frame", "frame_label", "max_word_length", "word_budget",
                                                 "projection", "points"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) fail("/" + key, "unknown field");

  LoadedGroup g;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) fail("/preset", "expected a string");
    for (const char* k : {"generators", "structure", "factor_sizes", "frame"})
      if (doc.contains(k)) fail(std::string("/") + k, "not allowed together with a preset");
    try {
      g = load_preset(doc["preset"].get<std::string>());
    } catch (const ConfigError& e) {
      fail("/preset", e.what());
    }
    if (doc.contains("n") && int_from_json(doc["n"], "/n", 1) != g.spec.n)
      fail("/n", "does not match the preset dimension n = " + std::to_string(g.spec.n));
  } else {
    if (!doc.contains("n")) fail("/n", "missing required field");
    const int n = int_from_json(doc["n"], "/n", 1);
    if (n + 1 > kMaxHalfDimension) fail("/n", "n + 1 must not exceed " + std::to_string(kMaxHalfDimension));
    const auto size = static_cast<Eigen::Index>(2 * n + 2);
    if (!doc.contains("generators")) fail("/generators", "missing required field");
    const json& gens = doc["generators"];
    if (!gens.is_array()) fail("/generators", "expected an array");
    if (gens.empty()) fail("/generators", "at least one generator is required");

    g.spec.n = n;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string path = "/generators/" + std::to_string(i);
      std::string name = i < 26 ? std::string(1, static_cast<char>('a' + i)) : "g" + std::to_string(i + 1);
      const json* mat = &gens[i];
      if (gens[i].is_object()) {
        for (const auto& [key, value] : gens[i].items())
          if (key != "name" && key != "matrix") fail(path + "/" + key, "unknown field");
        if (gens[i].contains("name")) {
          if (!gens[i]["name"].is_string() || gens[i]["name"].get<std::string>().empty())
            fail(path + "/name", "expected a non-empty string");
          name = gens[i]["name"].get<std::string>();
        }
        if (!gens[i].contains("matrix")) fail(path + "/matrix", "missing required field");
        mat = &gens[i]["matrix"];
      }
      const std::string mpath = gens[i].is_object() ? path + "/matrix" : path;
      const CMatrix m = matrix_from_json(*mat, mpath, size);
      try {
        g.spec.generators.push_back({name, ProjectiveMap::from_matrix(m, Word{static_cast<int>(i) + 1})});
      } catch (const Error& e) {
        fail(mpath, e.what());
      }
    }

    g.spec.structure = gens.size() == 1 ? GroupStructure::Cyclic : GroupStructure::Free;
    if (doc.contains("structure")) {
      const json& s = doc["structure"];
      const std::string v = s.is_string() ? s.get<std::string>() : "";
      if (v == "free") g.spec.structure = GroupStructure::Free;
      else if (v == "cyclic") g.spec.structure = GroupStructure::Cyclic;
      else if (v == "free-product") g.spec.structure = GroupStructure::FreeProduct;
      else fail("/structure", "expected \"free\", \"cyclic\" or \"free-product\"");
    }
    if (doc.contains("factor_sizes")) {
      const json& f = doc["factor_sizes"];
      if (!f.is_array()) fail("/factor_sizes", "expected an array of integers");
      for (std::size_t i = 0; i < f.size(); ++i)
        g.spec.factor_sizes.push_back(int_from_json(f[i], "/factor_sizes/" + std::to_string(i), 1));
    }
    if (g.spec.structure == GroupStructure::FreeProduct && g.spec.factor_sizes.empty())
      fail("/factor_sizes", "required for a free product");
    if (doc.contains("frame")) {
      g.spec.frame = matrix_from_json(doc["frame"], "/frame", size);
      g.spec.frame_label = "config";
    }
    if (doc.contains("frame_label")) {
      if (!doc["frame_label"].is_string()) fail("/frame_label", "expected a string");
      g.spec.frame_label = doc["frame_label"].get<std::string>();
    }
    try {
      g.spec.validate();
    } catch (const Error& e) {
      fail("", e.what());
    }
    g.description = source;
  }

  if (doc.contains("max_word_length")) g.spec.max_word_length = int_from_json(doc["max_word_length"], "/max_word_length", 0);
  if (doc.contains("word_budget"))
    g.spec.word_budget = static_cast<std::size_t>(int_from_json(doc["word_budget"], "/word_budget", 1));

  const auto dim = static_cast<Eigen::Index>(2 * g.spec.n + 2);
  if (doc.contains("projection")) {
    const json& p = doc["projection"];
    if (!p.is_array() || p.size() != 3) fail("/projection", "expected 3 rows");
    Eigen::MatrixXd proj(3, 2 * dim);
    for (std::size_t i = 0; i < 3; ++i) {
      const std::string row_path = "/projection/" + std::to_string(i);
      if (!p[i].is_array() || static_cast<Eigen::Index>(p[i].size()) != 2 * dim)
        fail(row_path, "expected " + std::to_string(2 * dim) + " real entries");
      for (std::size_t j = 0; j < p[i].size(); ++j) {
        if (!p[i][j].is_number()) fail(row_path + "/" + std::to_string(j), "expected a number");
        proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p[i][j].get<double>();
      }
    }
    g.projection = proj;
  }
  if (doc.contains("points")) {
    const json& pts = doc["points"];
    if (!pts.is_array()) fail("/points", "expected an array of points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string path = "/points/" + std::to_string(i);
      if (!pts[i].is_array() || static_cast<Eigen::Index>(pts[i].size()) != dim)
        fail(path, "expected " + std::to_string(dim) + " coordinates");
      CVector z(dim);
      for (std::size_t j = 0; j < pts[i].size(); ++j)
        z(static_cast<Eigen::Index>(j)) = entry_from_json(pts[i][j], path + "/" + std::to_string(j));
      if (z.norm() == 0.0) fail(path, "zero vector is not a projective point");
      g.points.push_back(z);
    }
  }
  return g;
}

LoadedGroup load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace typel::cli
