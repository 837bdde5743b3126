#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "veo/validation.hpp"

namespace veo {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 style: fields holding commas, quotes or newlines are quoted.
void write_csv(const CsvTable& table, std::ostream& out);
CsvTable read_csv(std::istream& in);

/// Shortest-ish text that survives a parse and re-format unchanged.
std::string format_number(double v);
double parse_number(const std::string& s);

struct TraceRow {
  std::size_t generation = 0;
  std::size_t runs = 0;
  double mean_best = 0.0;
  double sem_best = 0.0;
  double mean_mean = 0.0;
  double mean_best_so_far = 0.0;
  double sem_best_so_far = 0.0;
};

struct FinalResultRow {
  std::string network;
  std::string arm;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  double best_original_fitness = 0.0;
  std::vector<std::string> best_original_labels;
};

struct FitnessTableRow {
  std::string network;
  std::string arm;
  std::size_t runs = 0;
  double mean = 0.0;
  double sd = 0.0;
  /// Against the reference arm: "+", "≈", "-", or "ref".
  std::string decision;
  double p = 1.0;
};

struct AnovaRow {
  std::string network;
  double f = 0.0;
  double p = 1.0;
  bool different = false;
};

struct RankRow {
  std::string arm;
  double average_rank = 0.0;
};

struct ValidationGridRow {
  std::string network;
  std::string arm;
  /// Pass rate in percent per check; "n/a" in the file when the check never ran.
  std::array<std::optional<double>, kCheckCount> pass_rate{};
};

struct DegreeLogRow {
  std::string network;
  std::string arm;
  std::size_t run = 0;
  std::size_t generation = 0;
  std::string mode;
  std::string removed;
  std::string added;
  std::size_t removed_degree = 0;
  std::size_t added_degree = 0;
};

struct LatencyRow {
  std::string backend;
  std::string model;
  std::string role;
  std::size_t calls = 0;
  double mean_s = 0.0;
  double sd_s = 0.0;
};

template <typename Row>
void write_rows(const std::vector<Row>& rows, std::ostream& out);
template <typename Row>
std::vector<Row> read_rows(std::istream& in);
template <typename Row>
void write_rows(const std::vector<Row>& rows, const std::filesystem::path& path);
template <typename Row>
std::vector<Row> read_rows(const std::filesystem::path& path);

}  // namespace veo
