#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cosetgap {

// A letter is a signed, 1-based generator index: +i is generator i, -i its
// inverse.
using Letter = int;

inline constexpr Letter inverse(Letter x) noexcept { return -x; }

// Column of letter x in a table with one column per letter, ordered
// g1, g1^-1, g2, g2^-1, ...
inline constexpr std::size_t letter_column(Letter x) noexcept {
  return x > 0 ? 2 * static_cast<std::size_t>(x - 1)
               : 2 * static_cast<std::size_t>(-x - 1) + 1;
}

inline constexpr Letter column_letter(std::size_t col) noexcept {
  Letter g = static_cast<Letter>(col / 2) + 1;
  return col % 2 == 0 ? g : -g;
}

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  void push_back(Letter x) { letters_.push_back(x); }

  Word inverted() const;
  Word operator*(const Word& rhs) const;
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

  bool is_freely_reduced() const noexcept;

  // Largest |letter| occurring, 0 for the empty word.
  int max_generator() const noexcept;

 private:
  std::vector<Letter> letters_;
};

Word free_reduce(const Word& w);

// Signed count of occurrences of `generator` (1-based) in w.
long exponent_sum(const Word& w, int generator);

class FinitePresentation {
 public:
  FinitePresentation() = default;

  // Validates names (unique, non-empty identifiers) and that relators only
  // reference existing generators. Relators are stored as given.
  FinitePresentation(std::vector<std::string> generator_names,
                     std::vector<Word> relators);

  std::size_t num_generators() const noexcept { return names_.size(); }
  const std::vector<std::string>& generator_names() const noexcept {
    return names_;
  }
  const std::vector<Word>& relators() const noexcept { return relators_; }

  // Every relator has exactly three letters. Vacuously true without
  // relators.
  bool is_triangular() const noexcept;

  // Index (1-based) of a generator name, or 0.
  int generator_index(std::string_view name) const noexcept;

  // True when all names are single lowercase letters, in which case words
  // are written compactly with uppercase for inverses.
  bool compact_names() const noexcept;

  bool operator==(const FinitePresentation&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Word> relators_;
};

// Text format:
//
//   # comment
//   gens: a b
//   rels: aaaaaa bAA
//
// With single lowercase letter names a word is a run of letters, uppercase
// meaning inverse. Otherwise letters are joined by `*` and may carry an
// integer exponent, e.g. `t2*a^-1` or `a^6`. Relators of length three are
// kept verbatim (they are triangular cells); longer or shorter ones are
// freely reduced, and a relator that reduces to nothing is an error.
FinitePresentation parse_presentation(std::string_view text);
std::string serialize_presentation(const FinitePresentation& p);

// Parses one word token in the notation selected by `p`. `line` and `column`
// locate the token for error messages.
Word parse_word(std::string_view token, const FinitePresentation& p,
                int line = 1, int column = 1);
std::string format_word(const Word& w, const FinitePresentation& p);

// Whitespace separated words over `p`, one or more per line; `#` comments.
std::vector<Word> parse_word_list(std::string_view text,
                                  const FinitePresentation& p);

struct Triangularization {
  FinitePresentation presentation;
  // generator_map[i] is the new index of old generator i + 1.
  std::vector<int> generator_map;
  // definitions[j] expresses new generator j + 1 as a word in the old
  // generators (the padding generator is the empty word).
  std::vector<Word> definitions;
  int padding_generator = 0;  // 0 when no padding was needed
};

// Splits relators of length k >= 4 into k - 2 triangles using auxiliary
// generators t with l1 l2 t2^-1, t2 l3 t3^-1, ..., t_{k-2} l_{k-1} l_k. Short
// relators are padded with a generator g that carries the cell g g g^-1.
Triangularization triangularize(const FinitePresentation& p);

}  // namespace cosetgap
