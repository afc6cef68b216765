#include "coocnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"

namespace coocnet {

namespace {

void check_unique_ids(const ArticleSet& set) {
  std::unordered_set<std::string> seen;
  for (const auto& rec : set.records) {
    if (!seen.insert(rec.article_id).second) {
      throw DataError("duplicate article_id '" + rec.article_id + "'");
    }
  }
}

} // namespace

std::chrono::year_month_day parse_date(std::string_view text) {
  const auto fail = [&] {
    throw DataError("malformed date '" + std::string(text) +
                    "' (expected YYYY-MM-DD)");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
  int parts[3] = {0, 0, 0};
  const int spans[3][2] = {{0, 4}, {5, 2}, {8, 2}};
  for (int p = 0; p < 3; ++p) {
    for (int i = 0; i < spans[p][1]; ++i) {
      const char c = text[spans[p][0] + i];
      if (c < '0' || c > '9') fail();
      parts[p] = parts[p] * 10 + (c - '0');
    }
  }
  const std::chrono::year_month_day ymd{
      std::chrono::year{parts[0]},
      std::chrono::month{static_cast<unsigned>(parts[1])},
      std::chrono::day{static_cast<unsigned>(parts[2])}};
  if (!ymd.ok()) fail();
  return ymd;
}

std::string format_date(const std::chrono::year_month_day& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(date.year()),
                unsigned(date.month()), unsigned(date.day()));
  return buf;
}

namespace {

ArticleSet parse_corpus_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv_file(path);
  const std::size_t col_id = table.require_column("article_id");
  const std::size_t col_outlet = table.require_column("outlet_id");
  const std::size_t col_byline = table.require_column("byline");
  const auto col_date = table.column("date");
  const auto col_text = table.column("text");
  const auto col_contributor = table.column("contributor_id");

  ArticleSet set;
  set.records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ArticleRecord rec;
    rec.article_id = row[col_id];
    rec.outlet_id = row[col_outlet];
    rec.byline_raw = row[col_byline];
    if (rec.article_id.empty() || rec.outlet_id.empty()) {
      throw DataError("line " + std::to_string(table.line_numbers[r]) +
                      ": empty article_id or outlet_id");
    }
    try {
      if (col_date && !row[*col_date].empty()) {
        rec.date = parse_date(row[*col_date]);
      }
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(table.line_numbers[r]) + ": " +
                      e.what());
    }
    if (col_text && !row[*col_text].empty()) rec.text = row[*col_text];
    if (col_contributor && !row[*col_contributor].empty()) {
      rec.contributor_id = row[*col_contributor];
    }
    set.records.push_back(std::move(rec));
  }
  return set;
}

ArticleSet parse_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  ArticleSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(line_no) +
                      ": invalid JSON: " + e.what());
    }
    const auto need = [&](const char* key) -> std::string {
      if (!doc.contains(key) || !doc[key].is_string()) {
        throw DataError("line " + std::to_string(line_no) +
                        ": missing or non-string key '" + key + "'");
      }
      return doc[key].get<std::string>();
    };
    ArticleRecord rec;
    rec.article_id = need("article_id");
    rec.outlet_id = need("outlet_id");
    rec.byline_raw = need("byline");
    try {
      if (doc.contains("date") && doc["date"].is_string() &&
          !doc["date"].get<std::string>().empty()) {
        rec.date = parse_date(doc["date"].get<std::string>());
      }
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (doc.contains("text") && doc["text"].is_string()) {
      rec.text = doc["text"].get<std::string>();
    }
    if (doc.contains("contributor_id") && doc["contributor_id"].is_string()) {
      rec.contributor_id = doc["contributor_id"].get<std::string>();
    }
    set.records.push_back(std::move(rec));
  }
  return set;
}

} // namespace

ArticleSet parse_corpus(const std::filesystem::path& path,
                        CorpusFormat format) {
  if (!std::filesystem::exists(path)) {
    throw DataError("input file does not exist: " + path.string());
  }
  ArticleSet set = format == CorpusFormat::csv ? parse_corpus_csv(path)
                                               : parse_corpus_jsonl(path);
  check_unique_ids(set);
  set.provenance = "parsed " + std::to_string(set.records.size()) +
                   " records from " + path.filename().string();
  return set;
}

std::string normalize_byline(std::string_view byline,
                             std::span<const std::string> honorifics) {
  // Split into whitespace-delimited tokens, lowercased.
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : byline) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) tokens.push_back(current);

  // Strip leading honorifics, with or without a trailing period.
  std::size_t start = 0;
  while (start < tokens.size()) {
    std::string tok = tokens[start];
    if (!tok.empty() && tok.back() == '.') tok.pop_back();
    const bool is_honorific =
        std::find(honorifics.begin(), honorifics.end(), tok) !=
        honorifics.end();
    if (!is_honorific) break;
    ++start;
  }

  std::string out;
  for (std::size_t i = start; i < tokens.size(); ++i) {
    if (!out.empty()) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

ArticleSet clean_bylines(const ArticleSet& articles,
                         std::span<const std::string> generic_phrases,
                         std::span<const std::string> outlet_names,
                         std::span<const std::string> honorifics) {
  const auto in_list = [](std::span<const std::string> list,
                          const std::string& value) {
    return std::find(list.begin(), list.end(), value) != list.end();
  };
  const auto multiple_names = [](const std::string& s) {
    return s.find(',') != std::string::npos ||
           s.find('&') != std::string::npos ||
           s.find(" and ") != std::string::npos;
  };

  ArticleSet out;
  out.records.reserve(articles.records.size());
  for (const auto& rec : articles.records) {
    const std::string norm = normalize_byline(rec.byline_raw, honorifics);
    if (norm.empty()) continue;
    if (in_list(generic_phrases, norm)) continue;
    if (in_list(outlet_names, norm)) continue;
    if (multiple_names(norm)) continue;
    ArticleRecord kept = rec;
    kept.contributor_id = norm;
    out.records.push_back(std::move(kept));
  }
  const std::size_t dropped = articles.records.size() - out.records.size();
  out.provenance = articles.provenance + "; clean_bylines dropped " +
                   std::to_string(dropped);
  return out;
}

ArticleSet restrict_multi_outlet(const ArticleSet& articles,
                                 unsigned min_outlets) {
  if (min_outlets < 1) {
    throw std::invalid_argument("restrict_multi_outlet: min_outlets must be >= 1");
  }
  for (const auto& rec : articles.records) {
    if (!rec.contributor_id) {
      throw DataError("restrict_multi_outlet: record '" + rec.article_id +
                      "' has no contributor_id (run clean_bylines first)");
    }
  }

  std::vector<ArticleRecord> records = articles.records;
  std::size_t passes = 0;
  for (;;) {
    ++passes;
    std::map<std::string, std::set<std::string>> outlets_of;
    for (const auto& rec : records) {
      outlets_of[*rec.contributor_id].insert(rec.outlet_id);
    }
    std::vector<ArticleRecord> kept;
    kept.reserve(records.size());
    for (auto& rec : records) {
      if (outlets_of[*rec.contributor_id].size() >= min_outlets) {
        kept.push_back(std::move(rec));
      }
    }
    const bool changed = kept.size() != records.size();
    records = std::move(kept);
    if (!changed) break;
  }
  // Dropping a contributor cannot shrink anyone else's outlet set, so the
  // fixed point must be reached after a single filtering pass.
  if (passes > 2) {
    throw DataError("restrict_multi_outlet: fixed point took " +
                    std::to_string(passes) + " passes (invariant violated)");
  }

  ArticleSet out;
  out.records = std::move(records);
  out.provenance = articles.provenance + "; restrict_multi_outlet(min=" +
                   std::to_string(min_outlets) + ") kept " +
                   std::to_string(out.records.size());
  return out;
}

std::vector<ContributorProfile> contributor_stats(const ArticleSet& articles) {
  struct Agg {
    std::uint64_t stories = 0;
    std::set<std::string> outlets;
    std::optional<std::chrono::sys_days> first, last;
    bool missing_date = false;
  };
  std::map<std::string, Agg> by_contributor;
  for (const auto& rec : articles.records) {
    if (!rec.contributor_id) {
      throw DataError("contributor_stats: record '" + rec.article_id +
                      "' has no contributor_id");
    }
    Agg& agg = by_contributor[*rec.contributor_id];
    ++agg.stories;
    agg.outlets.insert(rec.outlet_id);
    if (rec.date) {
      const auto day = std::chrono::sys_days(*rec.date);
      if (!agg.first || day < *agg.first) agg.first = day;
      if (!agg.last || day > *agg.last) agg.last = day;
    } else {
      agg.missing_date = true;
    }
  }

  std::vector<ContributorProfile> profiles;
  profiles.reserve(by_contributor.size());
  for (const auto& [id, agg] : by_contributor) {
    ContributorProfile p;
    p.contributor_id = id;
    p.story_count = agg.stories;
    p.outlet_count = agg.outlets.size();
    if (!agg.missing_date && agg.first) {
      p.active_span_days =
          static_cast<std::uint64_t>((*agg.last - *agg.first).count());
    }
    profiles.push_back(std::move(p));
  }
  return profiles;
}

void write_articles_csv(std::ostream& out, const ArticleSet& articles) {
  const std::vector<std::string> header = {"article_id",     "outlet_id",
                                           "byline",         "contributor_id",
                                           "date",           "text"};
  write_csv_row(out, header);
  for (const auto& rec : articles.records) {
    const std::vector<std::string> row = {
        rec.article_id,
        rec.outlet_id,
        rec.byline_raw,
        rec.contributor_id.value_or(""),
        rec.date ? format_date(*rec.date) : "",
        rec.text.value_or("")};
    write_csv_row(out, row);
  }
}

void write_contributor_stats_csv(std::ostream& out,
                                 std::span<const ContributorProfile> profiles) {
  const std::vector<std::string> header = {"contributor_id", "story_count",
                                           "outlet_count", "active_span_days"};
  write_csv_row(out, header);
  for (const auto& p : profiles) {
    const std::vector<std::string> row = {
        p.contributor_id, std::to_string(p.story_count),
        std::to_string(p.outlet_count),
        p.active_span_days ? std::to_string(*p.active_span_days) : ""};
    write_csv_row(out, row);
  }
}

} // namespace coocnet
