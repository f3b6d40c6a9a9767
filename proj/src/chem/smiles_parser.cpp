#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallubench/chem/elements.hpp"
#include "hallubench/chem/smiles.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::chem {
namespace {

struct PendingBond {
  BondOrder order = BondOrder::Single;
  BondStereo stereo = BondStereo::None;
};

struct RingOpening {
  std::size_t atom;
  std::optional<PendingBond> bond;
  std::size_t position;
};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  Molecule parse() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      switch (c) {
        case '(': open_branch(); break;
        case ')': close_branch(); break;
        case '-': case '=': case '#': case ':': case '/': case '\\': read_bond(c); break;
        case '.': read_dot(); break;
        case '%': read_ring_bond(); break;
        case '[': read_bracket_atom(); break;
        default:
          if (is_digit(c)) {
            read_ring_bond();
          } else {
            read_organic_atom();
          }
      }
    }
    if (pending_) fail(ErrorCode::MalformedSmiles, "dangling bond at end of input");
    if (!branches_.empty()) fail(ErrorCode::UnbalancedParen, "unclosed '('");
    if (!rings_.empty()) {
      const auto& [digit, opening] = *rings_.begin();
      pos_ = opening.position;
      fail(ErrorCode::UnclosedRing, "ring-closure " + std::to_string(digit) + " is never closed");
    }
    return Molecule(std::move(atoms_), std::move(bonds_), std::string(text_));
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& what) const {
    throw Error(code, what + " (position " + std::to_string(pos_) + " in '" + std::string(text_) + "')");
  }

  void open_branch() {
    if (!previous_) fail(ErrorCode::MalformedSmiles, "branch without a preceding atom");
    if (pending_) fail(ErrorCode::MalformedSmiles, "bond symbol before '('");
    branches_.push_back({*previous_, atoms_.size()});
    ++pos_;
  }

  void close_branch() {
    if (branches_.empty()) fail(ErrorCode::UnbalancedParen, "unmatched ')'");
    if (pending_) fail(ErrorCode::MalformedSmiles, "dangling bond before ')'");
    const auto [anchor, atoms_before] = branches_.back();
    if (atoms_.size() == atoms_before) fail(ErrorCode::MalformedSmiles, "empty branch");
    branches_.pop_back();
    previous_ = anchor;
    ++pos_;
  }

  void read_bond(char c) {
    if (!previous_) fail(ErrorCode::MalformedSmiles, "bond without a preceding atom");
    if (pending_) fail(ErrorCode::MalformedSmiles, "two consecutive bond symbols");
    PendingBond bond;
    switch (c) {
      case '=': bond.order = BondOrder::Double; break;
      case '#': bond.order = BondOrder::Triple; break;
      case ':': bond.order = BondOrder::Aromatic; break;
      case '/': bond.stereo = BondStereo::Up; break;
      case '\\': bond.stereo = BondStereo::Down; break;
      default: break;
    }
    pending_ = bond;
    ++pos_;
  }

  void read_dot() {
    if (!previous_ || pending_) fail(ErrorCode::MalformedSmiles, "misplaced '.'");
    previous_.reset();
    ++pos_;
  }

  void read_ring_bond() {
    if (!previous_) fail(ErrorCode::MalformedSmiles, "ring-closure digit without a preceding atom");
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() || !is_digit(text_[pos_ + 1]) || !is_digit(text_[pos_ + 2])) {
        fail(ErrorCode::MalformedSmiles, "'%' must be followed by two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    const std::size_t here = *previous_;
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_.emplace(number, RingOpening{here, pending_, pos_});
      pending_.reset();
      return;
    }
    const RingOpening opening = it->second;
    rings_.erase(it);
    if (opening.atom == here) fail(ErrorCode::MalformedSmiles, "ring closure onto the same atom");
    std::optional<PendingBond> spec = pending_;
    if (opening.bond && spec && opening.bond->order != spec->order) {
      fail(ErrorCode::MalformedSmiles, "conflicting ring-closure bond orders");
    }
    if (!spec) spec = opening.bond;
    pending_.reset();
    for (const auto& b : bonds_) {
      if ((b.begin == opening.atom && b.end == here) || (b.begin == here && b.end == opening.atom)) {
        fail(ErrorCode::MalformedSmiles, "ring closure duplicates an existing bond");
      }
    }
    add_bond(opening.atom, here, spec);
  }

  void read_organic_atom() {
    const char c = text_[pos_];
    Atom atom;
    std::size_t length = 1;
    switch (c) {
      case 'B':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
          atom.atomic_number = 35;
          length = 2;
        } else {
          atom.atomic_number = 5;
        }
        break;
      case 'C':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
          atom.atomic_number = 17;
          length = 2;
        } else {
          atom.atomic_number = 6;
        }
        break;
      case 'N': atom.atomic_number = 7; break;
      case 'O': atom.atomic_number = 8; break;
      case 'P': atom.atomic_number = 15; break;
      case 'S': atom.atomic_number = 16; break;
      case 'F': atom.atomic_number = 9; break;
      case 'I': atom.atomic_number = 53; break;
      case 'b': atom.atomic_number = 5; atom.aromatic = true; break;
      case 'c': atom.atomic_number = 6; atom.aromatic = true; break;
      case 'n': atom.atomic_number = 7; atom.aromatic = true; break;
      case 'o': atom.atomic_number = 8; atom.aromatic = true; break;
      case 'p': atom.atomic_number = 15; atom.aromatic = true; break;
      case 's': atom.atomic_number = 16; atom.aromatic = true; break;
      default:
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
          fail(ErrorCode::UnknownElement, std::string("'") + c + "' is not an organic-subset atom");
        }
        fail(ErrorCode::MalformedSmiles, "unexpected character");
    }
    pos_ += length;
    add_atom(std::move(atom));
  }

  void read_bracket_atom() {
    const std::size_t start = pos_;
    const auto close = text_.find(']', start);
    if (close == std::string_view::npos) fail(ErrorCode::MalformedBracketAtom, "missing ']'");
    const std::string_view body = text_.substr(start + 1, close - start - 1);
    std::size_t i = 0;
    Atom atom;
    atom.explicit_h = 0;

    auto bad = [&](const std::string& what) { fail(ErrorCode::MalformedBracketAtom, what); };

    if (i < body.size() && is_digit(body[i])) {
      int isotope = 0;
      std::size_t digits = 0;
      while (i < body.size() && is_digit(body[i])) {
        if (++digits > 3) bad("isotope has too many digits");
        isotope = isotope * 10 + (body[i] - '0');
        ++i;
      }
      atom.isotope = isotope;
    }

    if (i >= body.size()) bad("missing element symbol");
    if (is_upper(body[i])) {
      std::optional<int> z;
      if (i + 1 < body.size() && is_lower(body[i + 1])) z = atomic_number(body.substr(i, 2));
      if (z) {
        i += 2;
      } else {
        z = atomic_number(body.substr(i, 1));
        if (!z) {
          pos_ = start + 1 + i;
          fail(ErrorCode::UnknownElement, "unknown element in bracket atom");
        }
        i += 1;
      }
      atom.atomic_number = *z;
    } else if (is_lower(body[i])) {
      std::optional<int> z;
      for (std::string_view two : {"se", "as", "te"}) {
        if (body.substr(i, 2) == two) {
          std::string upper(two);
          upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
          z = atomic_number(upper);
          i += 2;
          break;
        }
      }
      if (!z) {
        switch (body[i]) {
          case 'b': z = 5; break;
          case 'c': z = 6; break;
          case 'n': z = 7; break;
          case 'o': z = 8; break;
          case 'p': z = 15; break;
          case 's': z = 16; break;
          default:
            pos_ = start + 1 + i;
            fail(ErrorCode::UnknownElement, "unknown aromatic element in bracket atom");
        }
        ++i;
      }
      atom.atomic_number = *z;
      atom.aromatic = true;
    } else if (body[i] == '*') {
      fail(ErrorCode::UnknownElement, "wildcard atoms are not supported");
    } else {
      bad("missing element symbol");
    }

    if (i < body.size() && body[i] == '@') {
      ++i;
      atom.chirality = "@";
      if (i < body.size() && body[i] == '@') {
        ++i;
        atom.chirality = "@@";
      }
    }

    if (i < body.size() && body[i] == 'H') {
      ++i;
      int count = 1;
      if (i < body.size() && is_digit(body[i])) {
        count = body[i] - '0';
        ++i;
      }
      atom.explicit_h = count;
    }

    if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
      const char sign_char = body[i];
      const int sign = sign_char == '+' ? 1 : -1;
      ++i;
      int magnitude = 1;
      if (i < body.size() && is_digit(body[i])) {
        magnitude = 0;
        std::size_t digits = 0;
        while (i < body.size() && is_digit(body[i])) {
          if (++digits > 2) bad("charge has too many digits");
          magnitude = magnitude * 10 + (body[i] - '0');
          ++i;
        }
      } else {
        while (i < body.size() && body[i] == sign_char) {
          ++magnitude;
          ++i;
        }
      }
      atom.charge = sign * magnitude;
    }

    if (i < body.size() && body[i] == ':') {
      ++i;
      std::size_t digits = 0;
      while (i < body.size() && is_digit(body[i])) {
        ++digits;
        ++i;
      }
      if (digits == 0 || digits > 6) bad("malformed atom class");
    }

    if (i != body.size()) {
      pos_ = start + 1 + i;
      bad("unexpected characters in bracket atom");
    }
    if (atom.aromatic && !may_be_aromatic(atom.atomic_number)) bad("element cannot be aromatic");
    pos_ = close + 1;
    add_atom(std::move(atom));
  }

  void add_atom(Atom atom) {
    const std::size_t index = atoms_.size();
    atom.index = index;
    atoms_.push_back(std::move(atom));
    if (previous_) add_bond(*previous_, index, pending_);
    pending_.reset();
    previous_ = index;
  }

  void add_bond(std::size_t a, std::size_t b, const std::optional<PendingBond>& spec) {
    Bond bond{a, b, BondOrder::Single, BondStereo::None};
    if (spec) {
      bond.order = spec->order;
      bond.stereo = spec->stereo;
    } else if (atoms_[a].aromatic && atoms_[b].aromatic) {
      bond.order = BondOrder::Aromatic;
    }
    bonds_.push_back(bond);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::optional<std::size_t> previous_;
  std::optional<PendingBond> pending_;
  std::vector<std::pair<std::size_t, std::size_t>> branches_;  // (anchor atom, atom count at '(')
  std::map<int, RingOpening> rings_;
};

}  // namespace

Molecule parse_smiles(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::EmptyInput, "empty SMILES string");
  return SmilesParser(text).parse();
}

}  // namespace hallubench::chem
