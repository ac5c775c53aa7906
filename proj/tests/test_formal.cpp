#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "chemauto/errors.hpp"
#include "chemauto/formal.hpp"

using namespace chemauto;

TEST_CASE("language names round-trip") {
  for (Language lang : {Language::L1, Language::L2, Language::L3}) {
    CHECK(language_from_string(to_string(lang)) == lang);
  }
  CHECK_THROWS_AS(language_from_string("L4"), InputError);
  CHECK(alphabet(Language::L1) == "ab");
  CHECK(alphabet(Language::L2) == "()");
  CHECK(alphabet(Language::L3) == "abc");
}

TEST_CASE("verdict string form round-trips") {
  std::vector<Verdict> verdicts{Verdict::accept()};
  for (RejectKind kind :
       {RejectKind::BadOrder, RejectKind::ExcessA, RejectKind::ExcessB,
        RejectKind::ExcessC, RejectKind::PopEmptyStack,
        RejectKind::NonEmptyStack, RejectKind::NoReaction}) {
    verdicts.push_back(Verdict::reject(kind));
  }
  for (const Verdict& v : verdicts) {
    CHECK(verdict_from_string(to_string(v)) == v);
  }
  CHECK(to_string(Verdict::accept()) == "Accept");
  CHECK(to_string(Verdict::reject(RejectKind::ExcessA)) == "Reject:ExcessA");
  CHECK_THROWS_AS(verdict_from_string("Maybe"), InputError);
  CHECK_THROWS_AS(reject_kind_from_string("Nope"), InputError);
}

TEST_CASE("word validation") {
  CHECK_NOTHROW(validate_word(Language::L1, "abba"));
  CHECK_NOTHROW(validate_word(Language::L1, ""));
  CHECK_THROWS_AS(validate_word(Language::L1, "abc"), InputError);
  CHECK_THROWS_AS(validate_word(Language::L2, "a"), InputError);
  CHECK_NOTHROW(validate_word(Language::L2, "(()"));
  CHECK_THROWS_AS(validate_word(Language::L3, "ab#"), InputError);
}

TEST_CASE("word counts") {
  CHECK(word_count(2, 8) == 510);
  CHECK(word_count(2, 10) == 2046);
  CHECK(word_count(3, 4) == 120);
  CHECK(word_count(1, 5) == 5);
  CHECK_THROWS_AS(word_count(2, 64), InputError);
}

TEST_CASE("enumeration is ordered, complete, and duplicate-free") {
  const auto words = enumerate_words("ab", 3);
  REQUIRE(words.size() == 14);
  CHECK(words[0] == "a");
  CHECK(words[1] == "b");
  CHECK(words[2] == "aa");
  CHECK(words[5] == "bb");
  CHECK(words[6] == "aaa");
  CHECK(words.back() == "bbb");

  const auto all = enumerate_words("abc", 4);
  CHECK(all.size() == word_count(3, 4));
  std::set<std::string> unique(all.begin(), all.end());
  CHECK(unique.size() == all.size());
  // ordered by length, then lexicographically
  CHECK(std::is_sorted(all.begin(), all.end(),
                       [](const std::string& a, const std::string& b) {
                         if (a.size() != b.size()) return a.size() < b.size();
                         return a < b;
                       }));

  EnumerationOptions with_empty;
  with_empty.include_empty = true;
  const auto including = enumerate_words("ab", 2, with_empty);
  REQUIRE(including.size() == 7);
  CHECK(including[0].empty());
}

TEST_CASE("both-letters recognizer") {
  CHECK(recognize_l1("aab") == Verdict::accept());
  CHECK(recognize_l1("aaa") == Verdict::reject(RejectKind::NoReaction));
  CHECK(recognize_l1("b") == Verdict::reject(RejectKind::NoReaction));
  CHECK(recognize_l1("ab") == Verdict::accept());
  CHECK(recognize_l1("ba") == Verdict::accept());
  CHECK(recognize_l1("") == Verdict::reject(RejectKind::NoReaction));
  CHECK_THROWS_AS(recognize_l1("abc"), InputError);

  // Over all 510 words of length 1..8, the accepted count equals the total
  // minus the 8 all-a and 8 all-b words.
  std::size_t accepted = 0;
  for (const auto& w : enumerate_words("ab", 8)) {
    if (recognize_l1(w).accepted()) ++accepted;
  }
  CHECK(accepted == 510 - 16);
}

TEST_CASE("balanced-parentheses recognizer") {
  CHECK(recognize_l2("") == Verdict::accept());
  CHECK(recognize_l2("()") == Verdict::accept());
  CHECK(recognize_l2("(())()") == Verdict::accept());
  CHECK(recognize_l2(")(") == Verdict::reject(RejectKind::PopEmptyStack));
  CHECK(recognize_l2("())") == Verdict::reject(RejectKind::PopEmptyStack));
  CHECK(recognize_l2("(") == Verdict::reject(RejectKind::NonEmptyStack));
  CHECK(recognize_l2("(()") == Verdict::reject(RejectKind::NonEmptyStack));

  // Dyck words of length <= 10: Catalan numbers 1 + 2 + 5 + 14 + 42.
  std::size_t dyck = 0, pop = 0, nonempty = 0;
  const auto words = enumerate_words("()", 10);
  REQUIRE(words.size() == 2046);
  for (const auto& w : words) {
    const Verdict v = recognize_l2(w);
    if (v.accepted()) {
      ++dyck;
      CHECK(w.size() % 2 == 0);
    } else if (v.reject_kind == RejectKind::PopEmptyStack) {
      ++pop;
    } else if (v.reject_kind == RejectKind::NonEmptyStack) {
      ++nonempty;
    }
  }
  CHECK(dyck == 64);
  CHECK(dyck + pop + nonempty == 2046);
}

TEST_CASE("counting recognizer accepts exactly the balanced block words") {
  CHECK(recognize_l3("abc") == Verdict::accept());
  CHECK(recognize_l3("aabbcc") == Verdict::accept());
  CHECK(recognize_l3("aaabbbccc") == Verdict::accept());
  CHECK(recognize_l3("") == Verdict::reject(RejectKind::BadOrder));
}

TEST_CASE("counting recognizer pins order violations at the offending symbol") {
  // Any letter arriving after its phase has passed is an order violation,
  // regardless of what the counts would later say.
  CHECK(recognize_l3("ba") == Verdict::reject(RejectKind::BadOrder));
  CHECK(recognize_l3("acb") == Verdict::reject(RejectKind::BadOrder));
  CHECK(recognize_l3("ca") == Verdict::reject(RejectKind::BadOrder));
  CHECK(recognize_l3("cb") == Verdict::reject(RejectKind::BadOrder));
  CHECK(recognize_l3("abca") == Verdict::reject(RejectKind::BadOrder));
  CHECK(recognize_l3("abcb") == Verdict::reject(RejectKind::BadOrder));
  CHECK(recognize_l3("bca") == Verdict::reject(RejectKind::BadOrder));
}

TEST_CASE("counting recognizer names the dominant block of ordered words") {
  CHECK(recognize_l3("aab") == Verdict::reject(RejectKind::ExcessA));
  CHECK(recognize_l3("a") == Verdict::reject(RejectKind::ExcessA));
  CHECK(recognize_l3("aabbc") == Verdict::reject(RejectKind::ExcessB));
  CHECK(recognize_l3("abb") == Verdict::reject(RejectKind::ExcessB));
  CHECK(recognize_l3("b") == Verdict::reject(RejectKind::ExcessB));
  CHECK(recognize_l3("aabb") == Verdict::reject(RejectKind::ExcessB));
  CHECK(recognize_l3("abcc") == Verdict::reject(RejectKind::ExcessC));
  CHECK(recognize_l3("c") == Verdict::reject(RejectKind::ExcessC));
  CHECK(recognize_l3("bcc") == Verdict::reject(RejectKind::ExcessC));
}

TEST_CASE("ordered words partition cleanly by counts") {
  // Every non-BadOrder word is a block word a^x b^y c^z; check the
  // classification agrees with a direct count comparison.
  for (const auto& w : enumerate_words("abc", 6)) {
    const Verdict v = recognize_l3(w);
    if (v.reject_kind == RejectKind::BadOrder) continue;
    const auto x = std::count(w.begin(), w.end(), 'a');
    const auto y = std::count(w.begin(), w.end(), 'b');
    const auto z = std::count(w.begin(), w.end(), 'c');
    // ordered means the word really is a^x b^y c^z
    std::string rebuilt(x, 'a');
    rebuilt.append(y, 'b');
    rebuilt.append(z, 'c');
    CHECK(rebuilt == w);
    if (x == y && y == z) {
      CHECK(v == Verdict::accept());
    } else if (x > y) {
      CHECK(v == Verdict::reject(RejectKind::ExcessA));
    } else if (z > y) {
      CHECK(v == Verdict::reject(RejectKind::ExcessC));
    } else {
      CHECK(v == Verdict::reject(RejectKind::ExcessB));
    }
  }
}

TEST_CASE("recognize dispatcher matches the per-language functions") {
  CHECK(recognize(Language::L1, "ab") == recognize_l1("ab"));
  CHECK(recognize(Language::L2, "()") == recognize_l2("()"));
  CHECK(recognize(Language::L3, "abc") == recognize_l3("abc"));
}
