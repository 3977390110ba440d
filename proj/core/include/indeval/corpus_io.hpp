#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "indeval/corpus.hpp"

namespace indeval {

// JSONL corpus format, one record per line:
//
//   {"_alphabet": ["Yes", "No"]}                     optional, first line only
//   {"item_id": "...", "instruction": "...", "ratings": [{"rater_id": "...",
//    "response": "..."}], "llm_response": "...", "llm_samples": [...],
//    "vrs": [...], "indeterminate": true}
//
// instruction, llm_samples, vrs and indeterminate are optional. Unknown keys
// are rejected. Blank lines are skipped. Without a header the alphabet is the
// set of labels seen, in order of first appearance.

/// Throws ParseError (with a 1-based line number) on malformed records,
/// duplicate item ids, or labels outside a declared alphabet; DataError when
/// the input holds no items or the inferred alphabet has fewer than 2 labels.
[[nodiscard]] Corpus parse_corpus(std::istream& in);
[[nodiscard]] Corpus parse_corpus(std::string_view text);

/// Writes the alphabet header followed by one line per item. Absent optional
/// fields are omitted.
void write_corpus(const Corpus& corpus, std::ostream& out);
[[nodiscard]] std::string write_corpus(const Corpus& corpus);

/// Audit JSONL: {"item_id": "...", "indeterminate": true|false} per line.
/// A null "indeterminate" (an unfilled worksheet row) is a ParseError.
[[nodiscard]] std::vector<AuditRecord> parse_audits(std::istream& in);
[[nodiscard]] std::vector<AuditRecord> parse_audits(std::string_view text);

/// Blank audit worksheet: one {"item_id": ..., "indeterminate": null} per id.
void write_audit_worksheet(std::span<const std::string> item_ids, std::ostream& out);

}  // namespace indeval
