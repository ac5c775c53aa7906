#pragma once

// Exact recognizers for the three reference languages, plus bounded word
// enumeration for differential test suites.
//
//   L1: words over {a,b} that contain at least one a and at least one b
//   L2: balanced parentheses over {(,)} (Dyck words)
//   L3: a^n b^n c^n with n > 0, over {a,b,c}
//
// These are the ground-truth side of every differential test: the chemical
// simulations must reproduce their verdicts, including the reject
// classification.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chemauto {

enum class Language { L1, L2, L3 };

std::string_view to_string(Language lang);
Language language_from_string(std::string_view name);

// Alphabet in enumeration order ("ab", "()", "abc").
std::string_view alphabet(Language lang);

enum class Outcome { Accept, Reject };

// Why a word was rejected.  The first four kinds name the block that is
// over-represented (or out of order) relative to a^n b^n c^n membership;
// the stack kinds describe Dyck failures; NoReaction is the L1 fail state.
enum class RejectKind {
  BadOrder,
  ExcessA,
  ExcessB,
  ExcessC,
  PopEmptyStack,
  NonEmptyStack,
  NoReaction,
};

std::string_view to_string(RejectKind kind);
RejectKind reject_kind_from_string(std::string_view name);

struct Verdict {
  Outcome outcome = Outcome::Reject;
  std::optional<RejectKind> reject_kind;

  static Verdict accept() { return {Outcome::Accept, std::nullopt}; }
  static Verdict reject(RejectKind kind) { return {Outcome::Reject, kind}; }

  bool accepted() const { return outcome == Outcome::Accept; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Compact one-token form: "Accept" or "Reject:ExcessA".
std::string to_string(const Verdict& v);
Verdict verdict_from_string(std::string_view text);

// Throws InputError if the word contains a symbol outside the language's
// alphabet.
void validate_word(Language lang, std::string_view word);

// Exact recognizers.  All three throw InputError on out-of-alphabet symbols.
Verdict recognize(Language lang, std::string_view word);

// Accept iff the word contains >= 1 'a' and >= 1 'b'; Reject(NoReaction)
// otherwise.
Verdict recognize_l1(std::string_view word);

// Single-counter scan.  Reject(PopEmptyStack) on the first prefix with more
// ')' than '('; Reject(NonEmptyStack) when the full word leaves unmatched
// '('.  The empty word is balanced and accepted (differential suites skip it
// because the chemical start state predates the first stack reading).
Verdict recognize_l2(std::string_view word);

// Streaming scan mirroring the running machine: a symbol that breaks the
// a* b* c* phase order rejects as BadOrder at that position, exactly where
// an in-run check would pin it.  An ordered word is then judged by its block
// counts: accept iff all three match; otherwise the kind names the dominant
// block (ExcessA when a's outnumber b's, else ExcessC when c's outnumber
// b's, else ExcessB).  The empty word rejects as BadOrder (n is positive).
Verdict recognize_l3(std::string_view word);

// Number of nonempty words of length <= max_len over an alphabet of the given
// size (geometric sum).  Throws InputError on overflow past 2^63.
std::uint64_t word_count(std::size_t alphabet_size, std::size_t max_len);

struct EnumerationOptions {
  bool include_empty = false;
};

// All words of length 1..max_len (0..max_len with include_empty), ordered by
// length and lexicographically within each length, using the symbol order of
// the alphabet string.  Throws InputError if the total count exceeds 2^26
// (the suites stay far below this).
std::vector<std::string> enumerate_words(std::string_view alphabet,
                                         std::size_t max_len,
                                         EnumerationOptions opts = {});

}  // namespace chemauto
