#include "finsent/corpus.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool iequal(const std::string& a, std::size_t pos, const std::string& b) {
  if (pos + b.size() > a.size()) return false;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (ascii_lower(a[pos + i]) != ascii_lower(b[i])) return false;
  return true;
}

// Word characters for masking boundaries. Hyphen joins, so a company name
// embedded in a hyphenated compound is not a whole-word occurrence.
bool mask_word_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

void validate_record(const HeadlineRecord& r) {
  if (r.id.empty()) throw ValidationError("headline record has an empty id");
  if (trim(r.title).empty())
    throw ValidationError("headline '" + r.id + "' has a blank title");
  if (r.sentiment && (*r.sentiment < -1.0 || *r.sentiment > 1.0)) {
    std::ostringstream os;
    os << "headline '" << r.id << "' has sentiment " << *r.sentiment
       << " outside [-1, 1]";
    throw ValidationError(os.str());
  }
}

void check_unique_ids(const Dataset& ds) {
  std::set<std::string> seen;
  for (const auto& r : ds.records)
    if (!seen.insert(r.id).second)
      throw ValidationError("duplicate headline id '" + r.id + "'");
}

}  // namespace

Dataset load_headlines(std::istream& in, const std::string& provenance) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("headline JSON parse error: ") + e.what());
  }
  if (!root.is_array()) throw ParseError("headline JSON must be an array of objects");

  Dataset ds;
  ds.provenance = provenance;
  ds.records.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& el = root[i];
    const std::string at = "headline element " + std::to_string(i);
    if (!el.is_object()) throw ParseError(at + " is not an object");
    for (const char* key : {"id", "company", "title"}) {
      if (!el.contains(key) || !el[key].is_string())
        throw ParseError(at + " is missing string key \"" + key + "\"");
    }
    HeadlineRecord r;
    r.id = el["id"].get<std::string>();
    r.company = el["company"].get<std::string>();
    r.title = el["title"].get<std::string>();
    if (el.contains("sentiment") && !el["sentiment"].is_null()) {
      if (!el["sentiment"].is_number())
        throw ParseError(at + " has a non-numeric \"sentiment\"");
      r.sentiment = el["sentiment"].get<double>();
    }
    validate_record(r);
    ds.records.push_back(std::move(r));
  }
  check_unique_ids(ds);
  return ds;
}

Dataset load_headlines_file(const std::string& path, const std::string& provenance) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open headline file '" + path + "'");
  return load_headlines(in, provenance);
}

std::string serialize_headlines(const Dataset& dataset) {
  json arr = json::array();
  for (const auto& r : dataset.records) {
    json o;
    o["id"] = r.id;
    o["company"] = r.company;
    o["title"] = r.title;
    if (r.sentiment) o["sentiment"] = *r.sentiment;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

HeadlineRecord mask_company(const HeadlineRecord& record, const std::string& placeholder) {
  if (record.company.empty())
    throw ValidationError("cannot mask headline '" + record.id + "': empty company");
  const std::string& title = record.title;
  const std::string& name = record.company;

  std::string out;
  out.reserve(title.size());
  std::size_t pos = 0;
  while (pos < title.size()) {
    const bool left_ok = pos == 0 || !mask_word_char(static_cast<unsigned char>(title[pos - 1]));
    if (left_ok && iequal(title, pos, name)) {
      const std::size_t end = pos + name.size();
      const bool right_ok =
          end == title.size() || !mask_word_char(static_cast<unsigned char>(title[end]));
      if (right_ok) {
        out += placeholder;
        pos = end;
        continue;
      }
    }
    out += title[pos++];
  }

  HeadlineRecord masked = record;
  masked.title = std::move(out);
  return masked;
}

namespace {

// Decodes one UTF-8 codepoint; malformed bytes come back as one-byte
// codepoints so they act as separators.
std::uint32_t next_codepoint(const std::string& s, std::size_t& pos) {
  const unsigned char c = s[pos];
  int extra = 0;
  std::uint32_t cp = c;
  if (c >= 0xF0) { extra = 3; cp = c & 0x07; }
  else if (c >= 0xE0) { extra = 2; cp = c & 0x0F; }
  else if (c >= 0xC0) { extra = 1; cp = c & 0x1F; }
  if (extra > 0 && pos + extra >= s.size()) { ++pos; return c; }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char cc = s[pos + i];
    if ((cc & 0xC0) != 0x80) { ++pos; return c; }
    cp = (cp << 6) | (cc & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

bool is_token_codepoint(std::uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9') || cp == '_';
  }
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
  if (cp == 0xD7 || cp == 0xF7) return false;      // multiply / divide signs
  if (cp <= 0xBF) return false;                    // latin-1 punctuation
  return true;
}

std::uint32_t lower_codepoint(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // latin-1 capitals
  return cp;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

TokenSequence tokenize(const std::string& text) {
  TokenSequence tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::uint32_t cp = next_codepoint(text, pos);
    if (is_token_codepoint(cp)) {
      append_utf8(current, lower_codepoint(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double map_star_rating(int stars) {
  if (stars < 1 || stars > 5)
    throw ValidationError("star rating " + std::to_string(stars) + " outside 1..5");
  return (stars - 3) / 2.0;
}

double map_phrasebank_label(PhrasebankLabel label, double positive_value, double negative_value,
                            bool unchecked) {
  if (!unchecked) {
    if (positive_value != 1.0 && positive_value != 0.5)
      throw ValidationError("positive_value must be 1.0 or 0.5");
    if (negative_value != -1.0 && negative_value != -0.5)
      throw ValidationError("negative_value must be -1.0 or -0.5");
  }
  switch (label) {
    case PhrasebankLabel::neutral: return 0.0;
    case PhrasebankLabel::positive: return positive_value;
    case PhrasebankLabel::negative: return negative_value;
  }
  throw ValidationError("unknown phrasebank label");
}

Dataset merge_datasets(const Dataset& base, const Dataset& augment) {
  const std::string tag = augment.provenance.empty() ? "augment" : augment.provenance;
  Dataset merged;
  merged.provenance = base.provenance;
  merged.records = base.records;
  merged.records.reserve(base.size() + augment.size());
  for (const auto& r : augment.records) {
    HeadlineRecord copy = r;
    copy.id = tag + "/" + r.id;
    merged.records.push_back(std::move(copy));
  }
  check_unique_ids(merged);
  return merged;
}

std::vector<RatingReview> load_ratings(std::istream& in, std::size_t limit) {
  std::vector<RatingReview> reviews;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json o;
    try {
      o = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("ratings line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!o.is_object() || !o.contains("text") || !o["text"].is_string() ||
        !o.contains("stars") || !o["stars"].is_number_integer())
      throw ParseError("ratings line " + std::to_string(line_no) +
                       ": expected {\"text\": string, \"stars\": int}");
    RatingReview r;
    r.text = o["text"].get<std::string>();
    r.stars = o["stars"].get<int>();
    if (r.stars < 1 || r.stars > 5)
      throw ValidationError("ratings line " + std::to_string(line_no) + ": stars " +
                            std::to_string(r.stars) + " outside 1..5");
    reviews.push_back(std::move(r));
    if (limit > 0 && reviews.size() >= limit) break;
  }
  return reviews;
}

std::vector<PhrasebankEntry> load_phrasebank(std::istream& in, char delimiter) {
  std::vector<PhrasebankEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::size_t at = line.rfind(delimiter);
    if (at == std::string::npos)
      throw ParseError("phrasebank line " + std::to_string(line_no) + ": no '" +
                       std::string(1, delimiter) + "' delimiter");
    PhrasebankEntry e;
    e.text = trim(line.substr(0, at));
    const std::string label = trim(line.substr(at + 1));
    if (label == "positive") e.label = PhrasebankLabel::positive;
    else if (label == "neutral") e.label = PhrasebankLabel::neutral;
    else if (label == "negative") e.label = PhrasebankLabel::negative;
    else
      throw ValidationError("phrasebank line " + std::to_string(line_no) + ": unknown label '" +
                            label + "'");
    if (e.text.empty())
      throw ValidationError("phrasebank line " + std::to_string(line_no) + ": empty sentence");
    entries.push_back(std::move(e));
  }
  return entries;
}

Dataset ratings_to_dataset(const std::vector<RatingReview>& reviews,
                           const std::string& provenance) {
  Dataset ds;
  ds.provenance = provenance;
  ds.records.reserve(reviews.size());
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    HeadlineRecord r;
    r.id = std::to_string(i);
    r.title = reviews[i].text;
    r.sentiment = map_star_rating(reviews[i].stars);
    validate_record(r);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset phrasebank_to_dataset(const std::vector<PhrasebankEntry>& entries, double positive_value,
                              double negative_value, const std::string& provenance) {
  Dataset ds;
  ds.provenance = provenance;
  ds.records.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    HeadlineRecord r;
    r.id = std::to_string(i);
    r.title = entries[i].text;
    r.sentiment = map_phrasebank_label(entries[i].label, positive_value, negative_value);
    validate_record(r);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

}  // namespace finsent
