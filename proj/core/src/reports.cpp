#include "veo/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "veo/error.hpp"

namespace veo {

void write_csv(const CsvTable& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      const auto& f = fields[i];
      if (f.find_first_of(",\"\n\r") == std::string::npos) {
        out << f;
        continue;
      }
      out << '"';
      for (char c : f) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

CsvTable read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c = 0;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw ParseError("CSV input has no header");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw ParseError("CSV row has " + std::to_string(records[i].size()) + " fields, header has " +
                           std::to_string(table.header.size()),
                       i + 1);
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("not a number: '" + s + "'");
}

namespace {

std::size_t parse_count(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw ParseError("not a count: '" + s + "'");
}

std::string join(const std::vector<std::string>& xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += xs[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

template <typename Row>
struct Codec;

template <>
struct Codec<TraceRow> {
  static std::vector<std::string> header() {
    return {"generation", "runs", "mean_best", "sem_best", "mean_mean", "mean_best_so_far", "sem_best_so_far"};
  }
  static std::vector<std::string> encode(const TraceRow& r) {
    return {std::to_string(r.generation), std::to_string(r.runs),        format_number(r.mean_best),
            format_number(r.sem_best),    format_number(r.mean_mean),    format_number(r.mean_best_so_far),
            format_number(r.sem_best_so_far)};
  }
  static TraceRow decode(const std::vector<std::string>& f) {
    return {parse_count(f[0]),  parse_count(f[1]),  parse_number(f[2]), parse_number(f[3]),
            parse_number(f[4]), parse_number(f[5]), parse_number(f[6])};
  }
};

template <>
struct Codec<FinalResultRow> {
  static std::vector<std::string> header() {
    return {"network", "arm", "run", "seed", "best_fitness", "best_original_fitness", "best_original_labels"};
  }
  static std::vector<std::string> encode(const FinalResultRow& r) {
    return {r.network,
            r.arm,
            std::to_string(r.run),
            std::to_string(r.seed),
            format_number(r.best_fitness),
            format_number(r.best_original_fitness),
            join(r.best_original_labels, ';')};
  }
  static FinalResultRow decode(const std::vector<std::string>& f) {
    return {f[0],
            f[1],
            parse_count(f[2]),
            static_cast<std::uint64_t>(std::stoull(f[3])),
            parse_number(f[4]),
            parse_number(f[5]),
            split(f[6], ';')};
  }
};

template <>
struct Codec<FitnessTableRow> {
  static std::vector<std::string> header() { return {"network", "arm", "runs", "mean", "sd", "decision", "p"}; }
  static std::vector<std::string> encode(const FitnessTableRow& r) {
    return {r.network,          r.arm,      std::to_string(r.runs), format_number(r.mean),
            format_number(r.sd), r.decision, format_number(r.p)};
  }
  static FitnessTableRow decode(const std::vector<std::string>& f) {
    return {f[0], f[1], parse_count(f[2]), parse_number(f[3]), parse_number(f[4]), f[5], parse_number(f[6])};
  }
};

template <>
struct Codec<AnovaRow> {
  static std::vector<std::string> header() { return {"network", "f", "p", "different"}; }
  static std::vector<std::string> encode(const AnovaRow& r) {
    return {r.network, format_number(r.f), format_number(r.p), r.different ? "true" : "false"};
  }
  static AnovaRow decode(const std::vector<std::string>& f) {
    if (f[3] != "true" && f[3] != "false") throw ParseError("expected true or false, got '" + f[3] + "'");
    return {f[0], parse_number(f[1]), parse_number(f[2]), f[3] == "true"};
  }
};

template <>
struct Codec<RankRow> {
  static std::vector<std::string> header() { return {"arm", "average_rank"}; }
  static std::vector<std::string> encode(const RankRow& r) { return {r.arm, format_number(r.average_rank)}; }
  static RankRow decode(const std::vector<std::string>& f) { return {f[0], parse_number(f[1])}; }
};

template <>
struct Codec<ValidationGridRow> {
  static std::vector<std::string> header() {
    std::vector<std::string> h{"network", "arm"};
    for (Check c : kAllChecks) h.push_back(to_string(c));
    return h;
  }
  static std::vector<std::string> encode(const ValidationGridRow& r) {
    std::vector<std::string> f{r.network, r.arm};
    for (const auto& rate : r.pass_rate) {
      if (!rate) {
        f.emplace_back("n/a");
        continue;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", *rate);
      f.emplace_back(buf);
    }
    return f;
  }
  static ValidationGridRow decode(const std::vector<std::string>& f) {
    ValidationGridRow r{f[0], f[1], {}};
    for (std::size_t i = 0; i < kCheckCount; ++i) {
      if (f[2 + i] != "n/a") r.pass_rate[i] = parse_number(f[2 + i]);
    }
    return r;
  }
};

template <>
struct Codec<DegreeLogRow> {
  static std::vector<std::string> header() {
    return {"network", "arm", "run", "generation", "mode", "removed", "added", "removed_degree", "added_degree"};
  }
  static std::vector<std::string> encode(const DegreeLogRow& r) {
    return {r.network, r.arm,   std::to_string(r.run), std::to_string(r.generation), r.mode, r.removed,
            r.added,   std::to_string(r.removed_degree), std::to_string(r.added_degree)};
  }
  static DegreeLogRow decode(const std::vector<std::string>& f) {
    return {f[0], f[1], parse_count(f[2]), parse_count(f[3]), f[4], f[5], f[6], parse_count(f[7]), parse_count(f[8])};
  }
};

template <>
struct Codec<LatencyRow> {
  static std::vector<std::string> header() { return {"backend", "model", "role", "calls", "mean_s", "sd_s"}; }
  static std::vector<std::string> encode(const LatencyRow& r) {
    return {r.backend, r.model, r.role, std::to_string(r.calls), format_number(r.mean_s), format_number(r.sd_s)};
  }
  static LatencyRow decode(const std::vector<std::string>& f) {
    return {f[0], f[1], f[2], parse_count(f[3]), parse_number(f[4]), parse_number(f[5])};
  }
};

}  // namespace

template <typename Row>
void write_rows(const std::vector<Row>& rows, std::ostream& out) {
  CsvTable t;
  t.header = Codec<Row>::header();
  for (const auto& r : rows) t.rows.push_back(Codec<Row>::encode(r));
  write_csv(t, out);
}

template <typename Row>
std::vector<Row> read_rows(std::istream& in) {
  const auto t = read_csv(in);
  if (t.header != Codec<Row>::header()) throw ParseError("unexpected CSV header");
  std::vector<Row> out;
  for (const auto& f : t.rows) out.push_back(Codec<Row>::decode(f));
  return out;
}

template <typename Row>
void write_rows(const std::vector<Row>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_rows(rows, out);
}

template <typename Row>
std::vector<Row> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return read_rows<Row>(in);
}

#define VEO_INSTANTIATE_ROWS(Row)                                                     \
  template void write_rows<Row>(const std::vector<Row>&, std::ostream&);              \
  template std::vector<Row> read_rows<Row>(std::istream&);                            \
  template void write_rows<Row>(const std::vector<Row>&, const std::filesystem::path&); \
  template std::vector<Row> read_rows<Row>(const std::filesystem::path&);

VEO_INSTANTIATE_ROWS(TraceRow)
VEO_INSTANTIATE_ROWS(FinalResultRow)
VEO_INSTANTIATE_ROWS(FitnessTableRow)
VEO_INSTANTIATE_ROWS(AnovaRow)
VEO_INSTANTIATE_ROWS(RankRow)
VEO_INSTANTIATE_ROWS(ValidationGridRow)
VEO_INSTANTIATE_ROWS(DegreeLogRow)
VEO_INSTANTIATE_ROWS(LatencyRow)

#undef VEO_INSTANTIATE_ROWS

}  // namespace veo
