#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace finsent {

struct HeadlineRecord {
  std::string id;
  std::string company;
  std::string title;
  std::optional<double> sentiment;  // absent for unscored test inputs
  bool operator==(const HeadlineRecord&) const = default;
};

struct Dataset {
  std::vector<HeadlineRecord> records;
  std::string provenance;
  std::size_t size() const { return records.size(); }
  bool operator==(const Dataset&) const = default;
};

using TokenSequence = std::vector<std::string>;

struct RatingReview {
  std::string text;
  int stars = 0;
};

enum class PhrasebankLabel { positive, neutral, negative };

struct PhrasebankEntry {
  std::string text;
  PhrasebankLabel label = PhrasebankLabel::neutral;
};

// Parses a JSON array of {"id", "company", "title", "sentiment"?} objects.
// Throws ParseError (syntax / shape, with element index) or ValidationError
// (range and uniqueness violations, naming the offending id).
Dataset load_headlines(std::istream& in, const std::string& provenance = "headlines");
Dataset load_headlines_file(const std::string& path, const std::string& provenance = "headlines");

// Canonical JSON form; load_headlines(serialize_headlines(d)) == d.
std::string serialize_headlines(const Dataset& dataset);

// Replaces whole-word, case-insensitive occurrences of record.company in the
// title. A match must not touch an adjacent letter, digit, '_' or '-', so
// "bp-linked" is left alone while "BP," is masked.
HeadlineRecord mask_company(const HeadlineRecord& record, const std::string& placeholder = "_ORG_");

// Lowercases and splits into maximal runs of letters, digits or '_'.
// Non-ASCII codepoints count as letters except the general-punctuation block,
// so quotes and dashes separate but accented words stay whole.
TokenSequence tokenize(const std::string& text);

// stars 1..5 -> {-1, -0.5, 0, 0.5, 1}
double map_star_rating(int stars);

// neutral -> 0; positive_value in {1.0, 0.5}, negative_value in {-1.0, -0.5}
// unless unchecked.
double map_phrasebank_label(PhrasebankLabel label, double positive_value, double negative_value,
                            bool unchecked = false);

// Concatenates base then augment; every augment id is prefixed with
// "<augment.provenance>/" so ids stay unique.
Dataset merge_datasets(const Dataset& base, const Dataset& augment);

// JSON-lines {"text", "stars"}; limit == 0 reads everything.
std::vector<RatingReview> load_ratings(std::istream& in, std::size_t limit = 0);

// One "sentence<delimiter>label" entry per line; the label follows the last
// delimiter so the text may contain it.
std::vector<PhrasebankEntry> load_phrasebank(std::istream& in, char delimiter = '@');

Dataset ratings_to_dataset(const std::vector<RatingReview>& reviews,
                           const std::string& provenance = "ratings-augment");
Dataset phrasebank_to_dataset(const std::vector<PhrasebankEntry>& entries, double positive_value,
                              double negative_value,
                              const std::string& provenance = "phrasebank-augment");

}  // namespace finsent
