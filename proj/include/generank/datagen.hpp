#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "generank/sparse.hpp"

namespace generank {

/// Range-dependent random graph: nodes i < j are linked independently with
/// probability beta * lambda^(j - i - 1).
struct RengaParams {
  std::size_t n = 0;
  double lambda = 0.9;
  double beta = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

SparseSymMatrix generate_renga(const RengaParams& params);

/// G(n, p) random graph, each pair linked with probability `density`.
SparseSymMatrix generate_random_adjacency(std::size_t n, double density, std::uint64_t seed);

/// Gene -> annotation ids. Gene ids must be unique; annotation lists may be
/// empty (isolated genes).
using AnnotationTable = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Reads `gene_id<TAB>annotation_id` lines, aggregating per gene. A line with
/// only a gene id declares a gene without annotations. '#' starts a comment.
AnnotationTable read_annotation_tsv(std::istream& in);
AnnotationTable read_annotation_tsv(const std::filesystem::path& path);

struct AnnotationGraph {
  SparseSymMatrix adjacency;
  /// Row i of the adjacency belongs to gene_ids[i]; sorted ascending.
  std::vector<std::string> gene_ids;
};

/// Links two distinct genes iff their annotation sets intersect.
AnnotationGraph build_adjacency_from_annotations(const AnnotationTable& table);

/// Random table: every gene gets `per_gene` annotations drawn uniformly
/// from `annotations` labels (without replacement).
AnnotationTable generate_random_annotations(std::size_t genes, std::size_t annotations,
                                            std::size_t per_gene, std::uint64_t seed);

enum class ExpressionKind { Uniform, Random, File };

std::optional<ExpressionKind> parse_expression_kind(std::string_view name);
std::string_view to_string(ExpressionKind kind);

/// Every entry 1/n.
Vector uniform_expression(std::size_t n);
/// Entries uniform in (0,1), normalized to sum 1.
Vector random_expression(std::size_t n, std::uint64_t seed);

struct ExpressionData {
  std::vector<std::string> gene_ids;  // empty for the one-value-per-line format
  Vector values;
};

/// Plain one-value-per-line text, or CSV with header `gene_id,ex`. Negative
/// or non-finite entries are rejected.
ExpressionData read_expression(std::istream& in);
ExpressionData read_expression(const std::filesystem::path& path);

/// Reorders CSV-keyed values to match `gene_order`; plain lists pass through
/// after a length check.
Vector align_expression(const ExpressionData& data, std::span<const std::string> gene_order);

Vector make_expression_vector(ExpressionKind kind, std::size_t n, std::uint64_t seed = 0,
                              const std::filesystem::path& path = {});

}  // namespace generank
