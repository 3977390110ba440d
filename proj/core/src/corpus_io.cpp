#include "indeval/corpus_io.hpp"

#include <istream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "indeval/error.hpp"

namespace indeval {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kAlphabetKey = "_alphabet";

const std::unordered_set<std::string_view> kItemKeys = {
    "item_id", "instruction", "ratings", "llm_response", "llm_samples", "vrs", "indeterminate"};
const std::unordered_set<std::string_view> kRatingKeys = {"rater_id", "response"};
const std::unordered_set<std::string_view> kAuditKeys = {"item_id", "indeterminate"};

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line parsed as a JSON object.
  std::optional<json> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (is_blank(line)) continue;
      json value;
      try {
        value = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(line_no_, std::string("malformed JSON: ") + e.what());
      }
      if (!value.is_object()) throw ParseError(line_no_, "record is not a JSON object");
      return value;
    }
    return std::nullopt;
  }

  [[nodiscard]] std::size_t line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

void reject_unknown_keys(const json& obj, const std::unordered_set<std::string_view>& allowed,
                         std::size_t line, std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ParseError(line, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

const json& require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string("missing required key '") + key + "'");
  return *it;
}

std::string as_string(const json& value, std::string_view what, std::size_t line) {
  if (!value.is_string()) throw ParseError(line, std::string(what) + " must be a string");
  return value.get<std::string>();
}

const json& as_array(const json& value, std::string_view what, std::size_t line) {
  if (!value.is_array()) throw ParseError(line, std::string(what) + " must be an array");
  return value;
}

// Resolves labels against a declared alphabet, or accumulates an inferred one.
class LabelResolver {
 public:
  void declare(std::vector<Label> labels) { declared_.emplace(std::move(labels)); }

  Label resolve(const json& value, std::string_view what, std::size_t line) {
    std::string text = as_string(value, what, line);
    std::optional<Label> label;
    try {
      label.emplace(std::move(text));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, std::string(what) + ": " + e.what());
    }
    if (declared_) {
      if (!declared_->contains(*label)) {
        throw ParseError(line, "label '" + label->str() + "' in " + std::string(what) +
                                   " is outside the declared alphabet");
      }
    } else if (seen_.insert(label->str()).second) {
      inferred_.push_back(*label);
    }
    return *std::move(label);
  }

  LabelAlphabet finish() {
    if (declared_) return *std::move(declared_);
    if (inferred_.size() < 2) {
      throw DataError("inferred alphabet has " + std::to_string(inferred_.size()) +
                      " label(s); declare at least 2 with an _alphabet header");
    }
    return LabelAlphabet(std::move(inferred_));
  }

 private:
  std::optional<LabelAlphabet> declared_;
  std::vector<Label> inferred_;
  std::unordered_set<std::string> seen_;
};

LabelAlphabet parse_header(const json& obj, std::size_t line) {
  if (obj.size() != 1) throw ParseError(line, "alphabet header must contain only '_alphabet'");
  const json& arr = as_array(obj.at(std::string(kAlphabetKey)), "_alphabet", line);
  std::vector<Label> labels;
  for (const auto& v : arr) {
    try {
      labels.emplace_back(as_string(v, "_alphabet entry", line));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, std::string("_alphabet: ") + e.what());
    }
  }
  try {
    return LabelAlphabet(std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, std::string("_alphabet: ") + e.what());
  }
}

Item parse_item(const json& obj, std::size_t line, LabelResolver& labels) {
  reject_unknown_keys(obj, kItemKeys, line, "item record");

  std::string item_id = as_string(require(obj, "item_id", line), "item_id", line);
  if (item_id.empty()) throw ParseError(line, "item_id must be non-empty");

  std::optional<std::string> instruction;
  if (auto it = obj.find("instruction"); it != obj.end()) {
    instruction = as_string(*it, "instruction", line);
  }

  std::vector<RatingRecord> ratings;
  for (const auto& r : as_array(require(obj, "ratings", line), "ratings", line)) {
    if (!r.is_object()) throw ParseError(line, "each rating must be an object");
    reject_unknown_keys(r, kRatingKeys, line, "rating");
    std::string rater = as_string(require(r, "rater_id", line), "rater_id", line);
    Label response = labels.resolve(require(r, "response", line), "ratings", line);
    ratings.push_back({std::move(rater), std::move(response)});
  }

  Label llm_response = labels.resolve(require(obj, "llm_response", line), "llm_response", line);

  std::optional<std::vector<Label>> samples;
  if (auto it = obj.find("llm_samples"); it != obj.end()) {
    samples.emplace();
    for (const auto& s : as_array(*it, "llm_samples", line)) {
      samples->push_back(labels.resolve(s, "llm_samples", line));
    }
  }

  std::optional<ValidResponseSet> vrs;
  if (auto it = obj.find("vrs"); it != obj.end()) {
    std::vector<Label> members;
    for (const auto& m : as_array(*it, "vrs", line)) {
      members.push_back(labels.resolve(m, "vrs", line));
    }
    try {
      vrs.emplace(std::move(members));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, std::string("vrs: ") + e.what());
    }
  }

  std::optional<bool> flag;
  if (auto it = obj.find("indeterminate"); it != obj.end()) {
    if (!it->is_boolean()) throw ParseError(line, "indeterminate must be a boolean");
    flag = it->get<bool>();
  }

  return Item{std::move(item_id), std::move(instruction), std::move(ratings),
              std::move(llm_response), std::move(samples), std::move(vrs), flag};
}

ordered_json labels_to_json(std::span<const Label> labels) {
  ordered_json arr = ordered_json::array();
  for (const auto& l : labels) arr.push_back(l.str());
  return arr;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  LineReader reader(in);
  LabelResolver labels;
  std::vector<Item> items;
  std::unordered_map<std::string, std::size_t> first_line;
  bool first_record = true;

  while (auto record = reader.next()) {
    const std::size_t line = reader.line();
    if (record->contains(std::string(kAlphabetKey))) {
      if (!first_record) throw ParseError(line, "alphabet header must be the first record");
      auto alphabet = parse_header(*record, line);
      labels.declare({alphabet.labels().begin(), alphabet.labels().end()});
      first_record = false;
      continue;
    }
    first_record = false;
    Item item = parse_item(*record, line, labels);
    auto [it, inserted] = first_line.emplace(item.item_id, line);
    if (!inserted) {
      throw ParseError(line, "duplicate item_id '" + item.item_id + "' (first seen on line " +
                                 std::to_string(it->second) + ")");
    }
    items.push_back(std::move(item));
  }
  if (items.empty()) throw DataError("empty input: no item records");
  return Corpus{labels.finish(), std::move(items)};
}

Corpus parse_corpus(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  ordered_json header;
  header[std::string(kAlphabetKey)] = labels_to_json(corpus.alphabet.labels());
  out << header.dump() << '\n';

  for (const auto& item : corpus.items) {
    ordered_json rec;
    rec["item_id"] = item.item_id;
    if (item.instruction) rec["instruction"] = *item.instruction;
    ordered_json ratings = ordered_json::array();
    for (const auto& r : item.ratings) {
      ordered_json rating;
      rating["rater_id"] = r.rater_id;
      rating["response"] = r.response.str();
      ratings.push_back(std::move(rating));
    }
    rec["ratings"] = std::move(ratings);
    rec["llm_response"] = item.llm_response.str();
    if (item.llm_samples) rec["llm_samples"] = labels_to_json(*item.llm_samples);
    if (item.vrs) rec["vrs"] = labels_to_json(item.vrs->members());
    if (item.indeterminate_flag) rec["indeterminate"] = *item.indeterminate_flag;
    out << rec.dump() << '\n';
  }
}

std::string write_corpus(const Corpus& corpus) {
  std::ostringstream out;
  write_corpus(corpus, out);
  return out.str();
}

std::vector<AuditRecord> parse_audits(std::istream& in) {
  LineReader reader(in);
  std::vector<AuditRecord> audits;
  while (auto record = reader.next()) {
    const std::size_t line = reader.line();
    reject_unknown_keys(*record, kAuditKeys, line, "audit record");
    std::string id = as_string(require(*record, "item_id", line), "item_id", line);
    const json& flag = require(*record, "indeterminate", line);
    if (flag.is_null()) throw ParseError(line, "audit for '" + id + "' has not been filled in");
    if (!flag.is_boolean()) throw ParseError(line, "indeterminate must be a boolean");
    audits.push_back({std::move(id), flag.get<bool>()});
  }
  return audits;
}

std::vector<AuditRecord> parse_audits(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_audits(in);
}

void write_audit_worksheet(std::span<const std::string> item_ids, std::ostream& out) {
  for (const auto& id : item_ids) {
    ordered_json rec;
    rec["item_id"] = id;
    rec["indeterminate"] = nullptr;
    out << rec.dump() << '\n';
  }
}

}  // namespace indeval
