#include "fdmc/io.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fdmc {

namespace {

using nlohmann::json;

template <typename Row>
void write_row(std::ostream& out, const Row& row) {
  out << '[';
  for (Eigen::Index j = 0; j < row.size(); ++j) out << (j ? "," : "") << row(j);
  out << ']';
}

void write_header(std::ostream& out, std::int64_t m, int n, int p, int k, int r) {
  out << "{\n  \"m\": " << m << ",\n  \"n\": " << n << ",\n  \"p\": " << p << ",\n  \"k\": " << k
      << ",\n  \"r\": " << r << ",\n";
}

void write_meta(std::ostream& out, const Metadata& meta) {
  if (!meta.empty()) out << ",\n  \"meta\": " << json(meta).dump();
  out << "\n}\n";
}

int get_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) throw InputError(std::string("missing integer field '") + key + "'");
  return doc[key].get<int>();
}

InstanceFile parse_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("instance: top level must be an object");
  const int m = get_int(doc, "m");
  const int n = get_int(doc, "n");
  if (m < 1 || n < 0) throw InputError("instance: bad dimensions");
  if (!doc.contains("rows") || !doc["rows"].is_array() || static_cast<int>(doc["rows"].size()) != m)
    throw InputError("instance: 'rows' must hold m arrays");
  if (!doc.contains("colors") || !doc["colors"].is_array())
    throw InputError("instance: 'colors' must be an array");
  Matrix rows(m, n);
  for (int i = 0; i < m; ++i) {
    const auto& row = doc["rows"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw InputError("instance: row " + std::to_string(i) + " must have n entries");
    for (int j = 0; j < n; ++j) {
      if (!row[j].is_number_integer()) throw InputError("instance: non-integer entry");
      rows(i, j) = row[j].get<int>();
    }
  }
  std::vector<int> colors;
  for (const auto& z : doc["colors"]) {
    if (!z.is_number_integer()) throw InputError("instance: non-integer color");
    colors.push_back(z.get<int>());
  }
  InstanceFile file;
  file.instance = make_instance(std::move(rows), std::move(colors), get_int(doc, "p"), get_int(doc, "k"),
                                get_int(doc, "r"));
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) throw InputError("instance: 'meta' must be an object");
    for (const auto& [key, value] : doc["meta"].items())
      file.meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return file;
}

InstanceFile parse_compact(const std::string& text) {
  std::istringstream in(text);
  long long m = 0, n = 0, p = 0, k = 0, r = 0;
  if (!(in >> m >> n >> p >> k >> r)) throw InputError("instance: compact header 'm n p k r' expected");
  if (m < 1 || n < 0 || m > 100'000'000) throw InputError("instance: bad dimensions");
  Matrix rows(m, n);
  std::vector<int> colors(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!(in >> colors[i])) throw InputError("instance: missing color of row " + std::to_string(i));
    for (long long j = 0; j < n; ++j)
      if (!(in >> rows(i, j))) throw InputError("instance: missing entry in row " + std::to_string(i));
  }
  std::string rest;
  if (in >> rest) throw InputError("instance: trailing data '" + rest + "'");
  return {make_instance(std::move(rows), std::move(colors), static_cast<int>(p), static_cast<int>(k),
                        static_cast<int>(r)),
          {}};
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_instance(std::ostream& out, const Instance& inst, const Metadata& meta) {
  write_header(out, inst.m(), inst.n(), inst.p, inst.k, inst.r);
  out << "  \"colors\": [";
  for (int i = 0; i < inst.m(); ++i) out << (i ? "," : "") << inst.colors[i];
  out << "],\n  \"rows\": [\n";
  for (int i = 0; i < inst.m(); ++i) {
    out << "    ";
    write_row(out, inst.rows.row(i));
    out << (i + 1 < inst.m() ? ",\n" : "\n");
  }
  out << "  ]";
  write_meta(out, meta);
}

std::string instance_to_string(const Instance& inst, const Metadata& meta) {
  std::ostringstream out;
  write_instance(out, inst, meta);
  return out.str();
}

InstanceFile read_instance(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_string(buf.str());
}

InstanceFile instance_from_string(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("instance: empty input");
  return text[first] == '{' ? parse_json(text) : parse_compact(text);
}

InstanceFile load_instance(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_instance(in);
}

void save_instance(const std::filesystem::path& path, const Instance& inst, const Metadata& meta) {
  auto out = open_out(path);
  write_instance(out, inst, meta);
}

void write_solution(std::ostream& out, const Solution& sol) {
  out << "{\n  \"edits\": " << sol.edit_count << ",\n  \"distinct_types\": " << sol.distinct_types
      << ",\n  \"rows\": [\n";
  for (Eigen::Index i = 0; i < sol.edited_rows.rows(); ++i) {
    out << "    ";
    write_row(out, sol.edited_rows.row(i));
    out << (i + 1 < sol.edited_rows.rows() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
}

std::string solution_to_string(const Solution& sol) {
  std::ostringstream out;
  write_solution(out, sol);
  return out.str();
}

Solution read_solution(std::istream& in, const Instance& inst) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("solution: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw InputError("solution: 'rows' array expected");
  const auto& rows = doc["rows"];
  if (static_cast<int>(rows.size()) != inst.m()) throw InputError("solution: row count does not match instance");
  Matrix edited(inst.m(), inst.n());
  for (int i = 0; i < inst.m(); ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != inst.n())
      throw InputError("solution: row " + std::to_string(i) + " has the wrong length");
    for (int j = 0; j < inst.n(); ++j) {
      if (!rows[i][j].is_number_integer()) throw InputError("solution: non-integer entry");
      edited(i, j) = rows[i][j].get<int>();
    }
  }
  Solution sol = make_solution(inst, std::move(edited));
  if (doc.contains("edits") && doc["edits"] != sol.edit_count)
    throw InputError("solution: stored edit count disagrees with the matrix");
  if (doc.contains("distinct_types") && doc["distinct_types"] != sol.distinct_types)
    throw InputError("solution: stored type count disagrees with the matrix");
  return sol;
}

Solution load_solution(const std::filesystem::path& path, const Instance& inst) {
  auto in = open_in(path);
  return read_solution(in, inst);
}

void save_solution(const std::filesystem::path& path, const Solution& sol) {
  auto out = open_out(path);
  write_solution(out, sol);
}

void write_graph(std::ostream& out, const ColoredGraph& g) {
  out << g.vertices << ' ' << g.colors() << "\ncolors";
  for (int col : g.color) out << ' ' << col;
  out << '\n';
  for (auto [u, v] : g.edges) out << u + 1 << ' ' << v + 1 << '\n';
}

ColoredGraph read_graph(std::istream& in) {
  ColoredGraph g;
  int colors = 0;
  std::string word;
  if (!(in >> g.vertices >> colors) || g.vertices < 0) throw InputError("graph: header '<vertices> <colors>' expected");
  if (!(in >> word) || word != "colors") throw InputError("graph: 'colors' line expected");
  g.color.resize(g.vertices);
  for (int& col : g.color) {
    if (!(in >> col) || col < 1 || col > colors) throw InputError("graph: bad vertex color");
  }
  int u = 0, v = 0;
  while (in >> u) {
    if (!(in >> v)) throw InputError("graph: dangling edge endpoint");
    if (u < 1 || v < 1 || u > g.vertices || v > g.vertices || u == v) throw InputError("graph: bad edge");
    g.edges.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
  }
  if (!in.eof()) throw InputError("graph: unexpected token");
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

void stream_reduction_instance(std::ostream& out, const ReductionMeta& meta) {
  write_header(out, meta.rows, meta.n, 2, meta.k, static_cast<int>(meta.gadgets.size()));
  out << "  \"colors\": [";
  bool first = true;
  for_each_reduction_row(meta, [&](int, int z) {
    out << (first ? "" : ",") << z;
    first = false;
  });
  out << "],\n  \"rows\": [\n";
  std::vector<std::string> text(meta.gadgets.size());
  for (std::size_t u = 0; u < meta.gadgets.size(); ++u) {
    std::ostringstream row;
    write_row(row, meta.gadgets[u].row);
    text[u] = row.str();
  }
  std::int64_t written = 0;
  for_each_reduction_row(meta, [&](int u, int) {
    out << "    " << text[u] << (++written < meta.rows ? ",\n" : "\n");
  });
  out << "  ]";
  write_meta(out, {{"generator", "clique-reduction"},
                   {"q", std::to_string(meta.q)},
                   {"y", std::to_string(meta.y)},
                   {"multiplicity", std::to_string(meta.multiplicity)},
                   {"aggregate_rows", std::to_string(meta.aggregate_rows)}});
}

}  // namespace fdmc
