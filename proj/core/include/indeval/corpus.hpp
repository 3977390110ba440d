#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace indeval {

/// One forced-choice response option. Opaque and case-sensitive: two labels
/// are equal only if their text is byte-identical.
class Label {
 public:
  /// Throws std::invalid_argument if `value` is empty or contains a newline.
  explicit Label(std::string value);

  [[nodiscard]] const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  std::string value_;
};

/// Ordered set of labels, K >= 2. The order is fixed at construction and is
/// what plurality tie-breaking uses.
class LabelAlphabet {
 public:
  /// Throws std::invalid_argument on duplicates or fewer than two labels.
  explicit LabelAlphabet(std::vector<Label> labels);

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] std::span<const Label> labels() const noexcept { return labels_; }
  [[nodiscard]] const Label& operator[](std::size_t i) const { return labels_.at(i); }
  [[nodiscard]] std::optional<std::size_t> index_of(const Label& label) const;
  [[nodiscard]] bool contains(const Label& label) const { return index_of(label).has_value(); }

  friend bool operator==(const LabelAlphabet& a, const LabelAlphabet& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<Label> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct RatingRecord {
  std::string rater_id;
  Label response;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

/// Labels that are correct under at least one reasonable reading of an item.
/// Member order is kept as given so that serialization round-trips.
class ValidResponseSet {
 public:
  /// Throws std::invalid_argument if empty or if a label repeats.
  explicit ValidResponseSet(std::vector<Label> members);

  [[nodiscard]] std::span<const Label> members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool contains(const Label& label) const;
  [[nodiscard]] bool is_indeterminate() const noexcept { return members_.size() >= 2; }

  friend bool operator==(const ValidResponseSet&, const ValidResponseSet&) = default;

 private:
  std::vector<Label> members_;
};

struct Item {
  std::string item_id;
  std::optional<std::string> instruction;
  std::vector<RatingRecord> ratings;
  Label llm_response;
  std::optional<std::vector<Label>> llm_samples;
  std::optional<ValidResponseSet> vrs;
  std::optional<bool> indeterminate_flag;

  friend bool operator==(const Item&, const Item&) = default;
};

/// Items over a shared alphabet. This is a plain value: invariants are
/// checked by validate_corpus and by the operations that depend on them,
/// not at construction.
struct Corpus {
  LabelAlphabet alphabet;
  std::vector<Item> items;

  [[nodiscard]] std::size_t size() const noexcept { return items.size(); }
  /// Linear lookup; nullptr when absent.
  [[nodiscard]] const Item* find(std::string_view item_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct AuditRecord {
  std::string item_id;
  bool indeterminate = false;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

enum class Severity { error, warning };

struct Violation {
  std::string item_id;  // empty for corpus-level rules
  std::string rule;
  Severity severity = Severity::error;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace rules {
inline constexpr std::string_view kEmptyCorpus = "empty corpus";
inline constexpr std::string_view kDuplicateItemId = "duplicate item_id";
inline constexpr std::string_view kNoRatings = "no ratings";
inline constexpr std::string_view kLabelOutsideAlphabet = "label outside alphabet";
inline constexpr std::string_view kFlagVrsMismatch = "flag/vrs mismatch";
inline constexpr std::string_view kDuplicateRaterId = "duplicate rater_id";
}  // namespace rules

/// Checks every corpus invariant and returns the violations found, in item
/// order. Duplicate rater ids within an item are reported as warnings.
[[nodiscard]] std::vector<Violation> validate_corpus(const Corpus& corpus);

/// True if `report` contains at least one error-severity violation.
[[nodiscard]] bool has_errors(std::span<const Violation> report);

/// Modal share of a response multiset: (count of the most frequent label) / n.
/// Throws std::invalid_argument on an empty sequence.
[[nodiscard]] double agreement_score(std::span<const Label> responses);
[[nodiscard]] double agreement_score(std::span<const RatingRecord> ratings);

/// Sets indeterminate_flag on every audited item. Throws DataError for an id
/// not in the corpus or for two audits of one item that disagree.
[[nodiscard]] Corpus merge_audit(const Corpus& corpus, std::span<const AuditRecord> audits);

}  // namespace indeval

template <>
struct std::hash<indeval::Label> {
  std::size_t operator()(const indeval::Label& label) const noexcept {
    return std::hash<std::string>{}(label.str());
  }
};
