#include "generank/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "generank/error.hpp"

namespace generank {
namespace {

// Uniform in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in the open interval (0, 1).
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Builds CSR from undirected edges given as (low, high) pairs without
// duplicates. Rows are sorted afterwards.
SparseSymMatrix csr_from_unique_edges(std::size_t n,
                                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<SparseSymMatrix::Offset> offsets(n + 1, 0);
  for (const auto& [i, j] : edges) {
    ++offsets[i + 1];
    ++offsets[j + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<SparseSymMatrix::Col> cols(offsets[n]);
  std::vector<SparseSymMatrix::Offset> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [i, j] : edges) {
    cols[fill[i]++] = j;
    cols[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(cols.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              cols.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }
  std::vector<double> values(cols.size(), 1.0);
  return SparseSymMatrix::from_csr(n, std::move(offsets), std::move(cols), std::move(values));
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_expression_value(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "expression line " + std::to_string(line_no) + ": not a number");
  }
  if (trim(text.substr(used)).size() != 0) {
    fail(ErrorCode::Parse, "expression line " + std::to_string(line_no) + ": trailing characters");
  }
  if (!std::isfinite(value) || value < 0.0) {
    fail(ErrorCode::Validation, "expression line " + std::to_string(line_no) +
                                    ": value must be finite and nonnegative");
  }
  return value;
}

}  // namespace

void RengaParams::validate() const {
  if (n < 2) fail(ErrorCode::InvalidArgument, "RENGA needs n >= 2");
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    fail(ErrorCode::InvalidArgument, "RENGA lambda must lie in [0, 1)");
  }
  if (!(beta > 0.0 && beta <= 1.0)) fail(ErrorCode::InvalidArgument, "RENGA beta must lie in (0, 1]");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorCode::InvalidArgument, "RENGA n exceeds 32-bit indexing");
  }
}

SparseSymMatrix generate_renga(const RengaParams& params) {
  params.validate();
  const std::size_t n = params.n;
  std::mt19937_64 rng(params.seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  // All pairs at range k share probability beta * lambda^(k-1), so each range
  // is a run of Bernoulli trials sampled by geometric skips.
  for (std::size_t k = 1; k < n; ++k) {
    const double p = params.beta * std::pow(params.lambda, static_cast<double>(k - 1));
    if (p <= 0.0) break;
    const std::size_t trials = n - k;
    if (p >= 1.0) {
      for (std::size_t i = 0; i < trials; ++i) {
        edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + k));
      }
      continue;
    }
    const double log_q = std::log1p(-p);
    double pos = -1.0;
    while (true) {
      const double skip = std::floor(std::log(1.0 - uniform01(rng)) / log_q);
      pos += 1.0 + skip;
      if (pos >= static_cast<double>(trials)) break;
      const auto i = static_cast<std::size_t>(pos);
      edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + k));
    }
  }
  return csr_from_unique_edges(n, edges);
}

SparseSymMatrix generate_random_adjacency(std::size_t n, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "edge density must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < density) {
        edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }
  return csr_from_unique_edges(n, edges);
}

AnnotationTable read_annotation_tsv(std::istream& in) {
  AnnotationTable table;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto tab = content.find('\t');
    const std::string gene = trim(content.substr(0, tab));
    const std::string annotation = tab == std::string::npos ? std::string() : trim(content.substr(tab + 1));
    if (gene.empty()) {
      fail(ErrorCode::Parse, "annotation line " + std::to_string(line_no) + ": empty gene id");
    }
    if (annotation.find('\t') != std::string::npos) {
      fail(ErrorCode::Parse, "annotation line " + std::to_string(line_no) + ": expected two columns");
    }
    auto [it, inserted] = index.try_emplace(gene, table.size());
    if (inserted) table.emplace_back(gene, std::vector<std::string>{});
    if (!annotation.empty()) table[it->second].second.push_back(annotation);
  }
  return table;
}

AnnotationTable read_annotation_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return read_annotation_tsv(in);
}

AnnotationGraph build_adjacency_from_annotations(const AnnotationTable& table) {
  if (table.empty()) fail(ErrorCode::InvalidArgument, "annotation table is empty");
  AnnotationGraph graph;
  graph.gene_ids.reserve(table.size());
  for (const auto& entry : table) graph.gene_ids.push_back(entry.first);
  std::sort(graph.gene_ids.begin(), graph.gene_ids.end());
  if (auto dup = std::adjacent_find(graph.gene_ids.begin(), graph.gene_ids.end());
      dup != graph.gene_ids.end()) {
    fail(ErrorCode::Validation, "duplicate gene id '" + *dup + "'");
  }

  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < graph.gene_ids.size(); ++i) row_of.emplace(graph.gene_ids[i], i);

  std::map<std::string, std::vector<std::uint32_t>> members;
  for (const auto& [gene, annotations] : table) {
    const auto row = static_cast<std::uint32_t>(row_of.at(gene));
    for (const auto& a : annotations) members[a].push_back(row);
  }

  const std::size_t n = graph.gene_ids.size();
  std::vector<std::vector<std::uint32_t>> neighbours(n);
  for (auto& [annotation, rows] : members) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) neighbours[rows[a]].push_back(rows[b]);
    }
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = neighbours[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (auto j : row) edges.emplace_back(static_cast<std::uint32_t>(i), j);
  }
  graph.adjacency = csr_from_unique_edges(n, edges);
  return graph;
}

AnnotationTable generate_random_annotations(std::size_t genes, std::size_t annotations,
                                            std::size_t per_gene, std::uint64_t seed) {
  if (genes == 0) fail(ErrorCode::InvalidArgument, "need at least one gene");
  if (per_gene > annotations) {
    fail(ErrorCode::InvalidArgument, "per_gene exceeds the number of annotation labels");
  }
  std::mt19937_64 rng(seed);
  const int width = static_cast<int>(std::to_string(std::max(genes, annotations)).size());
  auto label = [width](char prefix, std::size_t k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, k);
    return std::string(buf);
  };
  std::vector<std::size_t> pool(annotations);
  AnnotationTable table;
  table.reserve(genes);
  for (std::size_t g = 0; g < genes; ++g) {
    for (std::size_t a = 0; a < annotations; ++a) pool[a] = a;
    std::vector<std::string> chosen;
    for (std::size_t t = 0; t < per_gene; ++t) {
      const std::size_t remaining = annotations - t;
      const auto pick = t + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(remaining));
      std::swap(pool[t], pool[std::min(pick, annotations - 1)]);
      chosen.push_back(label('A', pool[t]));
    }
    table.emplace_back(label('g', g), std::move(chosen));
  }
  return table;
}

std::optional<ExpressionKind> parse_expression_kind(std::string_view name) {
  const std::string key = lower(std::string(name));
  if (key == "uniform") return ExpressionKind::Uniform;
  if (key == "random") return ExpressionKind::Random;
  if (key == "file") return ExpressionKind::File;
  return std::nullopt;
}

std::string_view to_string(ExpressionKind kind) {
  switch (kind) {
    case ExpressionKind::Uniform: return "uniform";
    case ExpressionKind::Random: return "random";
    case ExpressionKind::File: return "file";
  }
  return "?";
}

Vector uniform_expression(std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "expression vector needs n >= 1");
  return Vector(n, 1.0 / static_cast<double>(n));
}

Vector random_expression(std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "expression vector needs n >= 1");
  std::mt19937_64 rng(seed);
  Vector ex(n);
  double total = 0.0;
  for (double& v : ex) {
    v = uniform_open(rng);
    total += v;
  }
  for (double& v : ex) v /= total;
  return ex;
}

ExpressionData read_expression(std::istream& in) {
  ExpressionData data;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  bool csv = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty()) continue;
    if (first) {
      first = false;
      if (content.find(',') != std::string::npos) {
        std::string header = lower(content);
        header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
        if (header != "gene_id,ex") {
          fail(ErrorCode::Parse, "expression CSV header must be 'gene_id,ex'");
        }
        csv = true;
        continue;
      }
    }
    if (csv) {
      const auto comma = content.find(',');
      if (comma == std::string::npos || content.find(',', comma + 1) != std::string::npos) {
        fail(ErrorCode::Parse, "expression line " + std::to_string(line_no) + ": expected gene_id,ex");
      }
      const std::string id = trim(content.substr(0, comma));
      if (id.empty()) fail(ErrorCode::Parse, "expression line " + std::to_string(line_no) + ": empty gene id");
      data.gene_ids.push_back(id);
      data.values.push_back(parse_expression_value(trim(content.substr(comma + 1)), line_no));
    } else {
      data.values.push_back(parse_expression_value(content, line_no));
    }
  }
  if (data.values.empty()) fail(ErrorCode::Parse, "expression input has no values");
  return data;
}

ExpressionData read_expression(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return read_expression(in);
}

Vector align_expression(const ExpressionData& data, std::span<const std::string> gene_order) {
  if (data.gene_ids.empty() || gene_order.empty()) {
    if (!gene_order.empty() && data.values.size() != gene_order.size()) {
      fail(ErrorCode::DimensionMismatch, "expression vector has " + std::to_string(data.values.size()) +
                                             " entries for " + std::to_string(gene_order.size()) + " genes");
    }
    return data.values;
  }
  std::unordered_map<std::string, double> by_id;
  for (std::size_t i = 0; i < data.gene_ids.size(); ++i) {
    if (!by_id.emplace(data.gene_ids[i], data.values[i]).second) {
      fail(ErrorCode::Validation, "duplicate gene id '" + data.gene_ids[i] + "' in expression file");
    }
  }
  if (by_id.size() != gene_order.size()) {
    fail(ErrorCode::DimensionMismatch, "expression file lists " + std::to_string(by_id.size()) +
                                           " genes, matrix has " + std::to_string(gene_order.size()));
  }
  Vector aligned;
  aligned.reserve(gene_order.size());
  for (const auto& id : gene_order) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) fail(ErrorCode::Validation, "no expression value for gene '" + id + "'");
    aligned.push_back(it->second);
  }
  return aligned;
}

Vector make_expression_vector(ExpressionKind kind, std::size_t n, std::uint64_t seed,
                              const std::filesystem::path& path) {
  switch (kind) {
    case ExpressionKind::Uniform: return uniform_expression(n);
    case ExpressionKind::Random: return random_expression(n, seed);
    case ExpressionKind::File: {
      Vector values = read_expression(path).values;
      if (values.size() != n) {
        fail(ErrorCode::DimensionMismatch, "expression file has " + std::to_string(values.size()) +
                                               " entries, expected " + std::to_string(n));
      }
      return values;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown expression kind");
}

}  // namespace generank
