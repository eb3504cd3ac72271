// src/stemmer.cc

// Copyright 2026 The narb Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Porter's suffix-stripping algorithm, steps 1a through 5b.

#include <string>

#include "narb/metrics.h"

namespace narb {

namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string w) : b_(std::move(w)) {}

  std::string Run() {
    if (b_.size() <= 2) return b_;
    Step1ab();
    Step1c();
    Step2();
    Step3();
    Step4();
    Step5();
    return b_;
  }

 private:
  bool Cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 ? true : !Cons(i - 1);
      default: return true;
    }
  }

  // Number of VC sequences in b_[0, j_].
  int M() const {
    int n = 0;
    std::size_t i = 0;
    const std::size_t end = j_;
    while (true) {
      if (i > end) return n;
      if (!Cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > end) return n;
        if (Cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > end) return n;
        if (!Cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool VowelInStem() const {
    for (std::size_t i = 0; i <= j_; ++i)
      if (!Cons(i)) return true;
    return false;
  }

  bool DoubleC(std::size_t j) const {
    return j >= 1 && b_[j] == b_[j - 1] && Cons(j);
  }

  // cvc at i, where the final c is not w, x or y.
  bool Cvc(std::size_t i) const {
    if (i < 2 || !Cons(i) || Cons(i - 1) || !Cons(i - 2)) return false;
    const char c = b_[i];
    return c != 'w' && c != 'x' && c != 'y';
  }

  // True when b_ ends with s; sets j_ to the index before the suffix.
  bool Ends(const std::string &s) {
    if (s.size() >= b_.size()) return false;
    if (b_.compare(b_.size() - s.size(), s.size(), s) != 0) return false;
    j_ = b_.size() - s.size() - 1;
    return true;
  }

  void SetTo(const std::string &s) { b_ = b_.substr(0, j_ + 1) + s; }
  void R(const std::string &s) {
    if (M() > 0) SetTo(s);
  }

  std::size_t Last() const { return b_.size() - 1; }

  void Step1ab() {
    if (b_.back() == 's') {
      if (Ends("sses")) {
        b_.resize(b_.size() - 2);
      } else if (Ends("ies")) {
        SetTo("i");
      } else if (b_.size() >= 2 && b_[b_.size() - 2] != 's') {
        b_.pop_back();
      }
    }
    if (Ends("eed")) {
      if (M() > 0) b_.pop_back();
    } else if ((Ends("ed") || Ends("ing")) && VowelInStem()) {
      b_.resize(j_ + 1);
      if (Ends("at")) {
        SetTo("ate");
      } else if (Ends("bl")) {
        SetTo("ble");
      } else if (Ends("iz")) {
        SetTo("ize");
      } else if (DoubleC(Last())) {
        const char c = b_.back();
        if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
      } else {
        j_ = Last();
        if (M() == 1 && Cvc(Last())) b_ += 'e';
      }
    }
  }

  void Step1c() {
    if (Ends("y") && VowelInStem()) b_.back() = 'i';
  }

  void Step2() {
    static const std::pair<const char *, const char *> kRules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
        {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},    {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        {"logi", "log"}};
    for (const auto &[suffix, repl] : kRules)
      if (Ends(suffix)) {
        R(repl);
        return;
      }
  }

  void Step3() {
    static const std::pair<const char *, const char *> kRules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
    for (const auto &[suffix, repl] : kRules)
      if (Ends(suffix)) {
        R(repl);
        return;
      }
  }

  void Step4() {
    static const char *kSuffixes[] = {"al",  "ance", "ence", "er",  "ic",  "able", "ible",
                                      "ant", "ement", "ment", "ent", "ion", "ou",   "ism",
                                      "ate", "iti",  "ous",  "ive", "ize"};
    for (const char *s : kSuffixes) {
      if (!Ends(s)) continue;
      if (std::string(s) == "ion" && !(b_[j_] == 's' || b_[j_] == 't')) return;
      if (M() > 1) b_.resize(j_ + 1);
      return;
    }
  }

  void Step5() {
    j_ = Last();
    if (b_.back() == 'e') {
      j_ = Last() - 1;
      const int m = M();
      if (m > 1 || (m == 1 && !Cvc(Last() - 1))) b_.pop_back();
    }
    j_ = Last();
    if (b_.back() == 'l' && DoubleC(Last()) && M() > 1) b_.pop_back();
  }

  std::string b_;
  std::size_t j_ = 0;
};

}  // namespace

std::string PorterStem(const std::string &word) {
  for (char c : word)
    if (c < 'a' || c > 'z') {
      // Only plain lowercase words are stemmed; punctuation-bearing tokens
      // are stemmed on their alphabetic prefix and keep the tail.
      std::size_t n = 0;
      while (n < word.size() && word[n] >= 'a' && word[n] <= 'z') ++n;
      if (n == 0) return word;
      return Stemmer(word.substr(0, n)).Run() + word.substr(n);
    }
  return Stemmer(word).Run();
}

}  // namespace narb
