#include "indeval/corpus.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "indeval/error.hpp"

namespace indeval {

Label::Label(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw std::invalid_argument("label must be non-empty");
  if (value_.find_first_of("\r\n") != std::string::npos) {
    throw std::invalid_argument("label must not contain newline characters");
  }
}

LabelAlphabet::LabelAlphabet(std::vector<Label> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw std::invalid_argument("label alphabet needs at least 2 labels, got " +
                                std::to_string(labels_.size()));
  }
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i].str(), i).second) {
      throw std::invalid_argument("duplicate label '" + labels_[i].str() + "' in alphabet");
    }
  }
}

std::optional<std::size_t> LabelAlphabet::index_of(const Label& label) const {
  auto it = index_.find(label.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ValidResponseSet::ValidResponseSet(std::vector<Label> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("valid response set must be non-empty");
  std::unordered_set<Label> seen;
  for (const auto& m : members_) {
    if (!seen.insert(m).second) {
      throw std::invalid_argument("duplicate label '" + m.str() + "' in valid response set");
    }
  }
}

bool ValidResponseSet::contains(const Label& label) const {
  return std::find(members_.begin(), members_.end(), label) != members_.end();
}

const Item* Corpus::find(std::string_view item_id) const {
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const Item& item) { return item.item_id == item_id; });
  return it == items.end() ? nullptr : &*it;
}

std::vector<Violation> validate_corpus(const Corpus& corpus) {
  std::vector<Violation> report;
  auto add = [&](const std::string& id, std::string_view rule, std::string detail,
                 Severity severity = Severity::error) {
    report.push_back({id, std::string(rule), severity, std::move(detail)});
  };

  if (corpus.items.empty()) add("", rules::kEmptyCorpus, "corpus has no items");

  std::unordered_set<std::string> ids;
  for (const auto& item : corpus.items) {
    if (!ids.insert(item.item_id).second) {
      add(item.item_id, rules::kDuplicateItemId, "item_id appears more than once");
    }
    if (item.ratings.empty()) add(item.item_id, rules::kNoRatings, "item has no ratings");

    auto check_label = [&](const Label& label, std::string_view where) {
      if (!corpus.alphabet.contains(label)) {
        add(item.item_id, rules::kLabelOutsideAlphabet,
            "'" + label.str() + "' in " + std::string(where));
      }
    };
    std::unordered_set<std::string> raters;
    bool duplicate_rater = false;
    for (const auto& r : item.ratings) {
      check_label(r.response, "ratings");
      if (!raters.insert(r.rater_id).second) duplicate_rater = true;
    }
    check_label(item.llm_response, "llm_response");
    if (item.llm_samples) {
      for (const auto& s : *item.llm_samples) check_label(s, "llm_samples");
    }
    if (item.vrs) {
      for (const auto& m : item.vrs->members()) check_label(m, "vrs");
    }
    if (item.vrs && item.indeterminate_flag &&
        *item.indeterminate_flag != item.vrs->is_indeterminate()) {
      add(item.item_id, rules::kFlagVrsMismatch,
          "indeterminate=" + std::string(*item.indeterminate_flag ? "true" : "false") +
              " but |vrs|=" + std::to_string(item.vrs->size()));
    }
    if (duplicate_rater) {
      add(item.item_id, rules::kDuplicateRaterId, "a rater_id repeats within the item",
          Severity::warning);
    }
  }
  return report;
}

bool has_errors(std::span<const Violation> report) {
  return std::any_of(report.begin(), report.end(),
                     [](const Violation& v) { return v.severity == Severity::error; });
}

double agreement_score(std::span<const Label> responses) {
  if (responses.empty()) throw std::invalid_argument("agreement_score of an empty sequence");
  std::unordered_map<std::string_view, std::size_t> counts;
  std::size_t modal = 0;
  for (const auto& r : responses) modal = std::max(modal, ++counts[r.str()]);
  return static_cast<double>(modal) / static_cast<double>(responses.size());
}

double agreement_score(std::span<const RatingRecord> ratings) {
  if (ratings.empty()) throw std::invalid_argument("agreement_score of an empty sequence");
  std::unordered_map<std::string_view, std::size_t> counts;
  std::size_t modal = 0;
  for (const auto& r : ratings) modal = std::max(modal, ++counts[r.response.str()]);
  return static_cast<double>(modal) / static_cast<double>(ratings.size());
}

Corpus merge_audit(const Corpus& corpus, std::span<const AuditRecord> audits) {
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < corpus.items.size(); ++i) {
    position.emplace(corpus.items[i].item_id, i);
  }
  std::unordered_map<std::size_t, bool> decided;
  for (const auto& audit : audits) {
    auto it = position.find(audit.item_id);
    if (it == position.end()) {
      throw DataError("audit references unknown item_id '" + audit.item_id + "'");
    }
    auto [slot, inserted] = decided.emplace(it->second, audit.indeterminate);
    if (!inserted && slot->second != audit.indeterminate) {
      throw DataError("conflicting audits for item_id '" + audit.item_id + "'");
    }
  }
  Corpus merged = corpus;
  for (const auto& [index, flag] : decided) merged.items[index].indeterminate_flag = flag;
  return merged;
}

}  // namespace indeval
