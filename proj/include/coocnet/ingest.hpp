#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coocnet {

/// One publication event. contributor_id is only set once the record has
/// survived byline cleaning.
struct ArticleRecord {
  std::string article_id;
  std::string outlet_id;
  std::string byline_raw;
  std::optional<std::string> contributor_id;
  std::optional<std::chrono::year_month_day> date;
  std::optional<std::string> text;
};

struct ArticleSet {
  std::vector<ArticleRecord> records;
  std::string provenance; // free-text note of applied filters
};

struct ContributorProfile {
  std::string contributor_id;
  std::uint64_t story_count = 0;
  std::uint64_t outlet_count = 0;
  // Absent when any of the contributor's records lacks a date.
  std::optional<std::uint64_t> active_span_days;
};

enum class CorpusFormat { csv, jsonl };

/// Parse "YYYY-MM-DD"; throws DataError on malformed or invalid dates.
std::chrono::year_month_day parse_date(std::string_view text);
std::string format_date(const std::chrono::year_month_day& date);

/// Load a corpus file. CSV needs columns article_id, outlet_id, byline and
/// optionally date, text, contributor_id; JSONL uses the same keys. Rows that
/// carry a contributor_id are accepted as already cleaned.
ArticleSet parse_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Lowercase, trim, collapse internal whitespace, strip leading honorifics.
std::string normalize_byline(std::string_view byline,
                             std::span<const std::string> honorifics);

/// Drop records whose normalized byline matches a generic phrase or outlet
/// name, or names multiple people (",", " and ", "&"). Survivors get
/// contributor_id = normalized byline. Phrase lists must be lowercase.
ArticleSet clean_bylines(const ArticleSet& articles,
                         std::span<const std::string> generic_phrases,
                         std::span<const std::string> outlet_names,
                         std::span<const std::string> honorifics = {});

/// Keep only records by contributors that appear in at least min_outlets
/// distinct outlets. Iterates to a fixed point (one pass must suffice, since
/// dropping one contributor's records never changes another's outlet count).
ArticleSet restrict_multi_outlet(const ArticleSet& articles,
                                 unsigned min_outlets);

/// One profile per contributor, sorted by contributor_id.
std::vector<ContributorProfile> contributor_stats(const ArticleSet& articles);

void write_articles_csv(std::ostream& out, const ArticleSet& articles);
void write_contributor_stats_csv(std::ostream& out,
                                 std::span<const ContributorProfile> profiles);

} // namespace coocnet
