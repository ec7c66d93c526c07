#pragma once

// Shared walker for the line-notation grammar used by both the SMILES parser
// and the substructure-pattern parser. It owns branches, ring closures and
// component separators; the sink decides what an atom token or bond means.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace retrokit::chem::detail {

struct AtomToken {
  std::string_view text;  // bracket contents without [], or the bare symbol
  bool bracket = false;
  std::size_t pos = 0;
};

inline bool is_bond_char(char c) {
  return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\';
}

/// Sink requirements:
///   int  atom(const AtomToken&)                     -> new atom index
///   void bond(int a, int b, char symbol, size_t pos) symbol == 0 when implicit
///   [[noreturn]] void fail(size_t pos, std::string reason)
template <class Sink>
void walk_line_notation(std::string_view s, Sink& sink) {
  struct RingOpen {
    int atom;
    char symbol;
    std::size_t pos;
  };
  enum class Last { Start, Atom, Bond, Open, Close, Dot, Ring };

  int prev = -1;
  char pending = 0;
  std::size_t pending_pos = 0;
  std::vector<int> branch_stack;
  std::map<int, RingOpen> rings;
  Last last = Last::Start;
  int atom_count = 0;

  if (s.empty()) sink.fail(0, "empty input");

  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '(') {
      if (prev < 0) sink.fail(i, "branch without a preceding atom");
      if (pending) sink.fail(i, "bond symbol before '('");
      if (last == Last::Open) sink.fail(i, "empty branch");
      branch_stack.push_back(prev);
      last = Last::Open;
      ++i;
      continue;
    }
    if (c == ')') {
      if (branch_stack.empty()) sink.fail(i, "unbalanced ')'");
      if (pending) sink.fail(i, "bond symbol before ')'");
      if (last == Last::Open) sink.fail(i, "empty branch");
      prev = branch_stack.back();
      branch_stack.pop_back();
      last = Last::Close;
      ++i;
      continue;
    }
    if (c == '.') {
      if (pending) sink.fail(i, "bond symbol before '.'");
      if (!branch_stack.empty()) sink.fail(i, "'.' inside a branch");
      if (last == Last::Start || last == Last::Dot) sink.fail(i, "empty component");
      prev = -1;
      last = Last::Dot;
      ++i;
      continue;
    }
    if (is_bond_char(c)) {
      if (pending) sink.fail(i, "consecutive bond symbols");
      if (prev < 0) sink.fail(i, "bond without a preceding atom");
      pending = c;
      pending_pos = i;
      last = Last::Bond;
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      if (prev < 0) sink.fail(i, "ring closure without a preceding atom");
      const std::size_t start = i;
      int number = 0;
      if (c == '%') {
        if (i + 2 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
            !std::isdigit(static_cast<unsigned char>(s[i + 2]))) {
          sink.fail(i, "'%' must be followed by two digits");
        }
        number = (s[i + 1] - '0') * 10 + (s[i + 2] - '0');
        i += 3;
      } else {
        number = c - '0';
        ++i;
      }
      auto it = rings.find(number);
      if (it == rings.end()) {
        rings.emplace(number, RingOpen{prev, pending, start});
      } else {
        const RingOpen open = it->second;
        rings.erase(it);
        if (open.atom == prev) sink.fail(start, "ring closure to the same atom");
        if (open.symbol && pending && open.symbol != pending) {
          sink.fail(start, "conflicting ring bond symbols");
        }
        if (pending) {
          sink.bond(prev, open.atom, pending, start);
        } else {
          sink.bond(open.atom, prev, open.symbol, start);
        }
      }
      pending = 0;
      last = Last::Ring;
      continue;
    }

    AtomToken tok;
    tok.pos = i;
    if (c == '[') {
      const auto close = s.find(']', i + 1);
      if (close == std::string_view::npos) sink.fail(i, "unclosed '['");
      tok.text = s.substr(i + 1, close - i - 1);
      tok.bracket = true;
      i = close + 1;
    } else if (c == 'C' && i + 1 < s.size() && s[i + 1] == 'l') {
      tok.text = s.substr(i, 2);
      i += 2;
    } else if (c == 'B' && i + 1 < s.size() && s[i + 1] == 'r') {
      tok.text = s.substr(i, 2);
      i += 2;
    } else if (std::string_view("BCNOPSFIbcnops*").find(c) != std::string_view::npos) {
      tok.text = s.substr(i, 1);
      ++i;
    } else {
      sink.fail(i, std::string("unexpected character '") + c + "'");
    }
    const int idx = sink.atom(tok);
    ++atom_count;
    if (prev >= 0) sink.bond(prev, idx, pending, pending ? pending_pos : tok.pos);
    pending = 0;
    prev = idx;
    last = Last::Atom;
  }

  if (pending) sink.fail(pending_pos, "dangling bond symbol");
  if (!branch_stack.empty()) sink.fail(s.size(), "unclosed branch");
  if (!rings.empty()) {
    const auto& [number, open] = *rings.begin();
    sink.fail(open.pos, "unclosed ring bond " + std::to_string(number));
  }
  if (last == Last::Dot) sink.fail(s.size(), "empty component");
  if (atom_count == 0) sink.fail(0, "no atoms");
}

}  // namespace retrokit::chem::detail
