#pragma once

// Text formats: instances (line-oriented JSON or a compact whitespace form),
// solutions, colored graphs, and streamed reduction instances.

#include "fdmc/core.hpp"
#include "fdmc/generators.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace fdmc {

using Metadata = std::map<std::string, std::string>;

struct InstanceFile {
  Instance instance;
  Metadata meta;
};

/// JSON document with one matrix row per line. Keys appear in the order
/// m, n, p, k, r, colors, rows, meta.
void write_instance(std::ostream& out, const Instance& inst, const Metadata& meta = {});
std::string instance_to_string(const Instance& inst, const Metadata& meta = {});

/// Accepts the JSON form or the compact form
///   m n p k r
///   <color> <v_1> ... <v_n>     (m lines)
/// Throws InputError on malformed or invalid input.
InstanceFile read_instance(std::istream& in);
InstanceFile instance_from_string(const std::string& text);

InstanceFile load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& inst, const Metadata& meta = {});

/// {"edits": e, "distinct_types": d, "rows": [...]}
void write_solution(std::ostream& out, const Solution& sol);
std::string solution_to_string(const Solution& sol);
/// Rebuilds the solution against `inst`; the stored counters must agree.
Solution read_solution(std::istream& in, const Instance& inst);
Solution load_solution(const std::filesystem::path& path, const Instance& inst);
void save_solution(const std::filesystem::path& path, const Solution& sol);

/// Graph text:
///   <vertices> <colors>
///   colors <c_1> ... <c_vertices>
///   <u> <v>                   (one edge per line, 1-based)
void write_graph(std::ostream& out, const ColoredGraph& g);
ColoredGraph read_graph(std::istream& in);

/// Writes the reduction instance row by row in the JSON instance format.
void stream_reduction_instance(std::ostream& out, const ReductionMeta& meta);

}  // namespace fdmc
