#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <qcrys/cartan.hpp>
#include <qcrys/quiver.hpp>

namespace qcrys::cli {

enum class ExitCode : int { ok = 0, check_failed = 1, input_error = 2, internal_error = 3 };

struct RunConfig {
  std::string command;            // character | crystal | verify | tensor | quiver-sample | quiver-check | dim-identity
  std::string type_or_matrix;     // preset name or path of a JSON matrix file
  std::vector<Int> lam;           // fundamental-weight coefficients
  std::vector<Int> lam2;          // second factor for `tensor`
  Int bound = 10;                 // height bound for `character`
  std::optional<Int> depth;       // generation depth; defaults to the full crystal for finite types
  std::vector<std::size_t> iota;  // 1-based cycle; empty means 1..n
  std::string dims;               // "v=..;w=.."
  std::uint64_t seed = 1;
  std::size_t count = 0;          // sweep size / sample count; 0 means the command's default
  std::string format = "json";
  std::string datum_path;
  std::string graph_path;
  std::string top_key;            // `verify --graph`: key of the top element
};

/// Runs one command, writing the report to `out`. Returns the exit code;
/// library errors propagate as exceptions.
ExitCode run(const RunConfig& config, std::ostream& out);

/// Parses arguments, runs, and maps errors to exit codes with a JSON
/// diagnostic on `err`. Honors --out and the QCRYS_SEED override.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::vector<Int> parse_int_list(const std::string& text);
GradedDims parse_dims(const std::string& text, std::size_t rank);

}  // namespace qcrys::cli
