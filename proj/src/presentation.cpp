#include "cosetgap/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>

#include "cosetgap/error.hpp"

namespace cosetgap {

Word Word::inverted() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& x : out) x = -x;
  return Word(std::move(out));
}

Word Word::operator*(const Word& rhs) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

bool Word::is_freely_reduced() const noexcept {
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    if (letters_[i] == -letters_[i - 1]) return false;
  }
  return true;
}

int Word::max_generator() const noexcept {
  int m = 0;
  for (Letter x : letters_) m = std::max(m, std::abs(x));
  return m;
}

Word free_reduce(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.length());
  for (Letter x : w) {
    if (!stack.empty() && stack.back() == -x) {
      stack.pop_back();
    } else {
      stack.push_back(x);
    }
  }
  return Word(std::move(stack));
}

long exponent_sum(const Word& w, int generator) {
  long sum = 0;
  for (Letter x : w) {
    if (x == generator) ++sum;
    if (x == -generator) --sum;
  }
  return sum;
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string unique_name(const std::set<std::string>& used, std::string base,
                        int& counter) {
  for (;;) {
    std::string candidate = base + std::to_string(counter++);
    if (!used.contains(candidate)) return candidate;
  }
}

}  // namespace

FinitePresentation::FinitePresentation(std::vector<std::string> generator_names,
                                       std::vector<Word> relators)
    : names_(std::move(generator_names)), relators_(std::move(relators)) {
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (!is_identifier(name)) {
      throw Error("invalid generator name '" + name + "'", ExitCode::parse);
    }
    if (!seen.insert(name).second) {
      throw Error("duplicate generator name '" + name + "'", ExitCode::parse);
    }
  }
  for (const auto& r : relators_) {
    for (Letter x : r) {
      if (x == 0 || static_cast<std::size_t>(std::abs(x)) > names_.size()) {
        throw Error("relator references unknown generator", ExitCode::parse);
      }
    }
  }
}

bool FinitePresentation::is_triangular() const noexcept {
  return std::all_of(relators_.begin(), relators_.end(),
                     [](const Word& r) { return r.length() == 3; });
}

int FinitePresentation::generator_index(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i) + 1;
  }
  return 0;
}

bool FinitePresentation::compact_names() const noexcept {
  return std::all_of(names_.begin(), names_.end(), [](const std::string& n) {
    return n.size() == 1 && std::islower(static_cast<unsigned char>(n[0]));
  });
}

Word parse_word(std::string_view token, const FinitePresentation& p, int line,
                int column) {
  if (token == "1") return {};
  std::vector<Letter> letters;
  if (p.compact_names()) {
    for (std::size_t i = 0; i < token.size(); ++i) {
      char c = token[i];
      int col = column + static_cast<int>(i);
      if (!std::isalpha(static_cast<unsigned char>(c))) {
        throw ParseError(std::string("unexpected character '") + c + "'",
                         line, col);
      }
      char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      int g = p.generator_index(std::string_view(&lower, 1));
      if (g == 0) {
        throw ParseError(std::string("unknown generator '") + c + "'", line,
                         col);
      }
      letters.push_back(std::isupper(static_cast<unsigned char>(c)) ? -g : g);
    }
    return Word(std::move(letters));
  }

  std::size_t start = 0;
  while (start <= token.size()) {
    std::size_t stop = token.find('*', start);
    if (stop == std::string_view::npos) stop = token.size();
    std::string_view factor = token.substr(start, stop - start);
    int col = column + static_cast<int>(start);
    if (factor.empty()) {
      throw ParseError("empty factor in word", line, col);
    }
    std::string_view name = factor;
    long exponent = 1;
    if (auto caret = factor.find('^'); caret != std::string_view::npos) {
      name = factor.substr(0, caret);
      std::string_view exp = factor.substr(caret + 1);
      auto [ptr, ec] =
          std::from_chars(exp.data(), exp.data() + exp.size(), exponent);
      if (exp.empty() || ec != std::errc() || ptr != exp.data() + exp.size()) {
        throw ParseError("malformed exponent '" + std::string(exp) + "'", line,
                         col + static_cast<int>(caret) + 1);
      }
    }
    if (!is_identifier(name)) {
      throw ParseError("malformed generator '" + std::string(name) + "'", line,
                       col);
    }
    int g = p.generator_index(name);
    if (g == 0) {
      throw ParseError("unknown generator '" + std::string(name) + "'", line,
                       col);
    }
    Letter x = exponent < 0 ? -g : g;
    for (long k = 0; k < std::labs(exponent); ++k) letters.push_back(x);
    start = stop + 1;
  }
  return Word(std::move(letters));
}

std::string format_word(const Word& w, const FinitePresentation& p) {
  if (w.empty()) return "1";
  const auto& names = p.generator_names();
  std::string out;
  if (p.compact_names()) {
    for (Letter x : w) {
      char c = names[static_cast<std::size_t>(std::abs(x) - 1)][0];
      out += x > 0 ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
  }
  bool first = true;
  for (Letter x : w) {
    if (!first) out += '*';
    first = false;
    out += names[static_cast<std::size_t>(std::abs(x) - 1)];
    if (x < 0) out += "^-1";
  }
  return out;
}

namespace {

struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> split_tokens(std::string_view s, int base_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) {
      out.push_back({s.substr(i, j - i), base_column + static_cast<int>(i)});
    }
    i = j;
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  return line;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++line_no, line);
    pos = nl + 1;
  }
}

}  // namespace

FinitePresentation parse_presentation(std::string_view text) {
  std::vector<std::string> names;
  bool have_gens = false;
  std::vector<std::pair<Token, int>> rel_tokens;  // token, line

  for_each_line(text, [&](int line_no, std::string_view raw) {
    std::string_view line = strip_comment(raw);
    if (blank(line)) return;
    std::size_t first = line.find_first_not_of(" \t");
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected 'gens:' or 'rels:'", line_no,
                       static_cast<int>(first) + 1);
    }
    std::string_view key = line.substr(first, colon - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) {
      key.remove_suffix(1);
    }
    auto body = line.substr(colon + 1);
    int body_col = static_cast<int>(colon) + 2;
    if (key == "gens") {
      if (have_gens) {
        throw ParseError("duplicate 'gens:' line", line_no,
                         static_cast<int>(first) + 1);
      }
      have_gens = true;
      for (const auto& tok : split_tokens(body, body_col)) {
        std::string name(tok.text);
        if (!is_identifier(name)) {
          throw ParseError("invalid generator name '" + name + "'", line_no,
                           tok.column);
        }
        if (std::find(names.begin(), names.end(), name) != names.end()) {
          throw ParseError("duplicate generator name '" + name + "'", line_no,
                           tok.column);
        }
        names.push_back(std::move(name));
      }
    } else if (key == "rels") {
      if (!have_gens) {
        throw ParseError("'rels:' before 'gens:'", line_no,
                         static_cast<int>(first) + 1);
      }
      for (const auto& tok : split_tokens(body, body_col)) {
        rel_tokens.emplace_back(tok, line_no);
      }
    } else {
      throw ParseError("unknown section '" + std::string(key) + "'", line_no,
                       static_cast<int>(first) + 1);
    }
  });

  if (!have_gens) throw ParseError("missing 'gens:' line", 1, 1);

  FinitePresentation bare(names, {});
  std::vector<Word> relators;
  for (const auto& [tok, line_no] : rel_tokens) {
    Word w = parse_word(tok.text, bare, line_no, tok.column);
    Word reduced = free_reduce(w);
    if (reduced.empty()) {
      throw ParseError("relator '" + std::string(tok.text) +
                           "' is trivial after free reduction",
                       line_no, tok.column);
    }
    relators.push_back(w.length() == 3 ? w : reduced);
  }
  return FinitePresentation(std::move(names), std::move(relators));
}

std::string serialize_presentation(const FinitePresentation& p) {
  std::ostringstream out;
  out << "gens:";
  for (const auto& n : p.generator_names()) out << ' ' << n;
  out << "\nrels:";
  for (const auto& r : p.relators()) out << ' ' << format_word(r, p);
  out << '\n';
  return out.str();
}

std::vector<Word> parse_word_list(std::string_view text,
                                  const FinitePresentation& p) {
  std::vector<Word> out;
  for_each_line(text, [&](int line_no, std::string_view raw) {
    std::string_view line = strip_comment(raw);
    for (const auto& tok : split_tokens(line, 1)) {
      out.push_back(parse_word(tok.text, p, line_no, tok.column));
    }
  });
  return out;
}

Triangularization triangularize(const FinitePresentation& p) {
  if (p.num_generators() == 0) {
    throw Error("cannot triangularize a presentation without generators");
  }
  std::set<std::string> used(p.generator_names().begin(),
                             p.generator_names().end());
  std::vector<std::string> names = p.generator_names();
  std::vector<Word> definitions;
  for (std::size_t i = 0; i < names.size(); ++i) {
    definitions.push_back(Word{static_cast<Letter>(i) + 1});
  }

  auto add_generator = [&](std::string name, Word definition) {
    used.insert(name);
    names.push_back(std::move(name));
    definitions.push_back(std::move(definition));
    return static_cast<Letter>(names.size());
  };

  int aux_counter = 1;
  Letter pad = 0;
  auto padding = [&] {
    if (pad == 0) {
      std::string name = used.contains("g") ? "" : "g";
      if (name.empty()) {
        int k = 1;
        name = unique_name(used, "g", k);
      }
      pad = add_generator(name, Word{});
    }
    return pad;
  };

  std::vector<Word> relators;
  for (const Word& r : p.relators()) {
    const auto k = r.length();
    if (k == 3) {
      relators.push_back(r);
    } else if (k >= 4) {
      // definitions in the original alphabet are prefixes of r
      Word prefix{r[0], r[1]};
      Letter t = add_generator(unique_name(used, "t", aux_counter), prefix);
      relators.push_back(Word{r[0], r[1], -t});
      for (std::size_t i = 2; i + 2 < k; ++i) {
        prefix.push_back(r[i]);
        Letter next = add_generator(unique_name(used, "t", aux_counter), prefix);
        relators.push_back(Word{t, r[i], -next});
        t = next;
      }
      relators.push_back(Word{t, r[k - 2], r[k - 1]});
    } else if (k == 2) {
      relators.push_back(Word{r[0], r[1], padding()});
    } else if (k == 1) {
      Letter g = padding();
      relators.push_back(Word{r[0], g, g});
    }
  }
  if (pad != 0) relators.push_back(Word{pad, pad, -pad});

  Triangularization out;
  out.presentation = FinitePresentation(std::move(names), std::move(relators));
  for (std::size_t i = 0; i < p.num_generators(); ++i) {
    out.generator_map.push_back(static_cast<int>(i) + 1);
  }
  out.definitions = std::move(definitions);
  out.padding_generator = pad;
  return out;
}

}  // namespace cosetgap
