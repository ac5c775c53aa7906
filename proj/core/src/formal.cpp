#include "chemauto/formal.hpp"

#include <algorithm>
#include <limits>

#include "chemauto/errors.hpp"

namespace chemauto {

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::L1: return "L1";
    case Language::L2: return "L2";
    case Language::L3: return "L3";
  }
  throw InputError("unknown language enumerator");
}

Language language_from_string(std::string_view name) {
  if (name == "L1" || name == "l1") return Language::L1;
  if (name == "L2" || name == "l2") return Language::L2;
  if (name == "L3" || name == "l3") return Language::L3;
  throw InputError("unknown language name: '" + std::string(name) +
                   "' (expected L1, L2, or L3)");
}

std::string_view alphabet(Language lang) {
  switch (lang) {
    case Language::L1: return "ab";
    case Language::L2: return "()";
    case Language::L3: return "abc";
  }
  throw InputError("unknown language enumerator");
}

std::string_view to_string(RejectKind kind) {
  switch (kind) {
    case RejectKind::BadOrder: return "BadOrder";
    case RejectKind::ExcessA: return "ExcessA";
    case RejectKind::ExcessB: return "ExcessB";
    case RejectKind::ExcessC: return "ExcessC";
    case RejectKind::PopEmptyStack: return "PopEmptyStack";
    case RejectKind::NonEmptyStack: return "NonEmptyStack";
    case RejectKind::NoReaction: return "NoReaction";
  }
  throw InputError("unknown reject kind enumerator");
}

RejectKind reject_kind_from_string(std::string_view name) {
  for (RejectKind kind :
       {RejectKind::BadOrder, RejectKind::ExcessA, RejectKind::ExcessB,
        RejectKind::ExcessC, RejectKind::PopEmptyStack,
        RejectKind::NonEmptyStack, RejectKind::NoReaction}) {
    if (name == to_string(kind)) return kind;
  }
  throw InputError("unknown reject kind: '" + std::string(name) + "'");
}

std::string to_string(const Verdict& v) {
  if (v.accepted()) return "Accept";
  std::string out = "Reject";
  if (v.reject_kind) {
    out += ':';
    out += to_string(*v.reject_kind);
  }
  return out;
}

Verdict verdict_from_string(std::string_view text) {
  if (text == "Accept") return Verdict::accept();
  constexpr std::string_view prefix = "Reject:";
  if (text.substr(0, prefix.size()) == prefix) {
    return Verdict::reject(reject_kind_from_string(text.substr(prefix.size())));
  }
  throw InputError("unparsable verdict: '" + std::string(text) + "'");
}

void validate_word(Language lang, std::string_view word) {
  const std::string_view sigma = alphabet(lang);
  for (char ch : word) {
    if (sigma.find(ch) == std::string_view::npos) {
      throw InputError(std::string("symbol '") + ch + "' is not in the " +
                       std::string(to_string(lang)) + " alphabet \"" +
                       std::string(sigma) + "\"");
    }
  }
}

Verdict recognize(Language lang, std::string_view word) {
  switch (lang) {
    case Language::L1: return recognize_l1(word);
    case Language::L2: return recognize_l2(word);
    case Language::L3: return recognize_l3(word);
  }
  throw InputError("unknown language enumerator");
}

Verdict recognize_l1(std::string_view word) {
  validate_word(Language::L1, word);
  const bool has_a = word.find('a') != std::string_view::npos;
  const bool has_b = word.find('b') != std::string_view::npos;
  if (has_a && has_b) return Verdict::accept();
  return Verdict::reject(RejectKind::NoReaction);
}

Verdict recognize_l2(std::string_view word) {
  validate_word(Language::L2, word);
  long depth = 0;
  for (char ch : word) {
    depth += (ch == '(') ? 1 : -1;
    if (depth < 0) return Verdict::reject(RejectKind::PopEmptyStack);
  }
  if (depth > 0) return Verdict::reject(RejectKind::NonEmptyStack);
  return Verdict::accept();
}

Verdict recognize_l3(std::string_view word) {
  validate_word(Language::L3, word);
  if (word.empty()) return Verdict::reject(RejectKind::BadOrder);

  // Order violations are detected in-stream, mirroring how the running
  // machine pins them the moment the offending symbol arrives: once the
  // b-block has started no further a may appear, and once the c-block has
  // started neither a nor b may appear.  "ba" is therefore an order
  // violation (the trailing a), not a count mismatch.
  enum Phase { kA, kB, kC };
  Phase phase = kA;
  long x = 0, y = 0, z = 0;
  for (char ch : word) {
    switch (ch) {
      case 'a':
        if (phase != kA) return Verdict::reject(RejectKind::BadOrder);
        ++x;
        break;
      case 'b':
        if (phase == kC) return Verdict::reject(RejectKind::BadOrder);
        phase = kB;
        ++y;
        break;
      case 'c':
        phase = kC;
        ++z;
        break;
    }
  }
  // The word is a^x b^y c^z; classify by block counts.  Unmatched a's
  // dominate, then surplus c's over matched pairs, then any b imbalance.
  if (x == y && y == z) return Verdict::accept();
  if (x > y) return Verdict::reject(RejectKind::ExcessA);
  if (z > y) return Verdict::reject(RejectKind::ExcessC);
  return Verdict::reject(RejectKind::ExcessB);
}

std::uint64_t word_count(std::size_t alphabet_size, std::size_t max_len) {
  if (alphabet_size == 0) return 0;
  std::uint64_t total = 0;
  std::uint64_t pow = 1;
  for (std::size_t len = 1; len <= max_len; ++len) {
    if (pow > std::numeric_limits<std::uint64_t>::max() / alphabet_size) {
      throw InputError("word_count overflow");
    }
    pow *= alphabet_size;
    if (total > std::numeric_limits<std::uint64_t>::max() - pow) {
      throw InputError("word_count overflow");
    }
    total += pow;
  }
  return total;
}

std::vector<std::string> enumerate_words(std::string_view sigma,
                                         std::size_t max_len,
                                         EnumerationOptions opts) {
  if (sigma.empty()) throw InputError("enumerate_words: empty alphabet");
  const std::uint64_t total = word_count(sigma.size(), max_len);
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 26;
  if (total > kLimit) {
    throw InputError("enumerate_words: " + std::to_string(total) +
                     " words exceeds the enumeration limit");
  }

  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(total) + (opts.include_empty ? 1 : 0));
  if (opts.include_empty) words.emplace_back();

  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      std::string w(len, sigma[0]);
      for (std::size_t i = 0; i < len; ++i) w[i] = sigma[idx[i]];
      words.push_back(std::move(w));
      // Odometer increment, most significant position first gives
      // lexicographic order within the length class.
      std::size_t pos = len;
      while (pos > 0) {
        --pos;
        if (++idx[pos] < sigma.size()) break;
        idx[pos] = 0;
        if (pos == 0) goto next_length;
      }
    }
  next_length:;
  }
  return words;
}

}  // namespace chemauto
