#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "molrl/chem/smiles.hpp"
#include "molrl/text.hpp"

namespace molrl::chem {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::EmptyInput:
      return "EmptyInput";
    case ParseErrorKind::UnbalancedBranch:
      return "UnbalancedBranch";
    case ParseErrorKind::UnclosedRing:
      return "UnclosedRing";
    case ParseErrorKind::UnknownElement:
      return "UnknownElement";
    case ParseErrorKind::MalformedBracket:
      return "MalformedBracket";
    case ParseErrorKind::UnexpectedToken:
      return "UnexpectedToken";
    case ParseErrorKind::AromaticOutsideRing:
      return "AromaticOutsideRing";
  }
  return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at " + std::to_string(position) + ": " +
                         detail),
      kind_(kind),
      position_(position) {}

namespace {

constexpr int kMaxCharge = 15;
constexpr int kMaxHydrogens = 16;

// Bond as written: `explicit_order` is empty for an implicit bond.
struct PendingBond {
  std::optional<BondOrder> explicit_order;
  std::size_t position = 0;
};

struct RingOpening {
  std::size_t atom;
  std::optional<BondOrder> order;
  std::size_t position;
};

struct ParsedBond {
  std::size_t begin;
  std::size_t end;
  std::optional<BondOrder> explicit_order;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  MolGraph run() {
    if (s_.empty()) throw ParseError(ParseErrorKind::EmptyInput, 0, "no SMILES text");
    bool expect_atom_after_dot = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '[' || std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
        const std::size_t atom = c == '[' ? parse_bracket_atom() : parse_organic_atom();
        if (prev_) {
          bonds_.push_back({*prev_, atom, pending_ ? pending_->explicit_order : std::nullopt});
        } else if (pending_) {
          fail(ParseErrorKind::UnexpectedToken, pending_->position, "bond without a preceding atom");
        }
        pending_.reset();
        prev_ = atom;
        expect_atom_after_dot = false;
      } else if (c == '(') {
        if (!prev_) fail(ParseErrorKind::UnexpectedToken, pos_, "branch without a preceding atom");
        if (pending_) fail(ParseErrorKind::UnexpectedToken, pos_, "bond symbol before '('");
        branches_.push_back({*prev_, atoms_.size(), pos_});
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty()) fail(ParseErrorKind::UnbalancedBranch, pos_, "')' without matching '('");
        if (pending_) fail(ParseErrorKind::UnexpectedToken, pending_->position, "dangling bond before ')'");
        if (branches_.back().atom_count_at_open == atoms_.size()) {
          fail(ParseErrorKind::UnexpectedToken, pos_, "empty branch");
        }
        prev_ = branches_.back().anchor;
        branches_.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\') {
        if (pending_) fail(ParseErrorKind::UnexpectedToken, pos_, "two consecutive bond symbols");
        BondOrder order = BondOrder::Single;
        if (c == '=') order = BondOrder::Double;
        if (c == '#') order = BondOrder::Triple;
        if (c == ':') order = BondOrder::Aromatic;
        if (c == '/' || c == '\\') discarded_ = true;
        pending_ = PendingBond{order, pos_};
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        parse_ring_closure();
      } else if (c == '.') {
        if (!prev_ || expect_atom_after_dot) fail(ParseErrorKind::UnexpectedToken, pos_, "empty component");
        if (pending_) fail(ParseErrorKind::UnexpectedToken, pos_, "bond symbol before '.'");
        prev_.reset();
        expect_atom_after_dot = true;
        ++pos_;
      } else {
        fail(ParseErrorKind::UnexpectedToken, pos_, std::string("unexpected character '") + c + "'");
      }
    }
    if (pending_) fail(ParseErrorKind::UnexpectedToken, pending_->position, "dangling bond at end of input");
    if (expect_atom_after_dot) fail(ParseErrorKind::UnexpectedToken, s_.size() - 1, "empty component");
    if (!branches_.empty()) fail(ParseErrorKind::UnbalancedBranch, branches_.back().position, "unclosed '('");
    if (!rings_.empty()) {
      const auto& [digit, open] = *rings_.begin();
      fail(ParseErrorKind::UnclosedRing, open.position, "ring bond " + std::to_string(digit) + " never closed");
    }
    return assemble();
  }

 private:
  struct BranchOpen {
    std::size_t anchor;
    std::size_t atom_count_at_open;
    std::size_t position;
  };

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<ParsedBond> bonds_;
  std::optional<std::size_t> prev_;
  std::optional<PendingBond> pending_;
  std::vector<BranchOpen> branches_;
  std::map<int, RingOpening> rings_;
  bool discarded_ = false;

  [[noreturn]] static void fail(ParseErrorKind kind, std::size_t at, const std::string& detail) {
    throw ParseError(kind, at, detail);
  }

  bool peek(char c, std::size_t offset = 0) const {
    return pos_ + offset < s_.size() && s_[pos_ + offset] == c;
  }

  std::size_t add_atom(Atom a) {
    a.index = atoms_.size();
    atoms_.push_back(a);
    return a.index;
  }

  std::size_t parse_organic_atom() {
    const std::size_t start = pos_;
    const char c = s_[pos_];
    if (c == '*') fail(ParseErrorKind::UnknownElement, start, "wildcard atom '*' is not supported");
    Atom atom;
    if (c == 'C' && peek('l', 1)) {
      atom.element = Element::Cl;
      pos_ += 2;
    } else if (c == 'B' && peek('r', 1)) {
      atom.element = Element::Br;
      pos_ += 2;
    } else {
      const bool lower = std::islower(static_cast<unsigned char>(c)) != 0;
      const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      const auto element = element_from_symbol(std::string_view(&upper, 1));
      if (!element || !in_organic_subset(*element) || (lower && !has_aromatic_form(*element))) {
        fail(ParseErrorKind::UnknownElement, start,
             std::string("'") + c + "' is not an organic-subset atom; use brackets or a supported element");
      }
      atom.element = *element;
      atom.aromatic = lower;
      ++pos_;
    }
    return add_atom(atom);
  }

  int read_number(std::size_t max_digits) {
    int value = 0;
    std::size_t digits = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) && digits < max_digits) {
      value = value * 10 + (s_[pos_] - '0');
      ++pos_;
      ++digits;
    }
    return digits == 0 ? -1 : value;
  }

  std::size_t parse_bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;  // '['
    auto malformed = [&](const std::string& why) { fail(ParseErrorKind::MalformedBracket, start, why); };

    if (read_number(4) >= 0) discarded_ = true;  // isotope

    if (pos_ >= s_.size()) malformed("unterminated bracket atom");
    Atom atom;
    atom.bracket = true;
    const char c = s_[pos_];
    if (c == '*') fail(ParseErrorKind::UnknownElement, pos_, "wildcard atom '*' is not supported");
    if (!std::isalpha(static_cast<unsigned char>(c))) malformed("expected an element symbol");
    std::string sym(1, c);
    if (std::isupper(static_cast<unsigned char>(c)) && pos_ + 1 < s_.size() &&
        std::islower(static_cast<unsigned char>(s_[pos_ + 1]))) {
      sym.push_back(s_[pos_ + 1]);
    }
    const bool lower = std::islower(static_cast<unsigned char>(c)) != 0;
    if (lower) {
      // Two-letter aromatic symbols (se, as, te) are outside the supported set.
      if (pos_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_ + 1]))) {
        fail(ParseErrorKind::UnknownElement, pos_, "unsupported aromatic symbol");
      }
      sym[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    const auto element = element_from_symbol(sym);
    if (!element) fail(ParseErrorKind::UnknownElement, pos_, "unsupported element '" + sym + "'");
    if (lower && !has_aromatic_form(*element)) {
      fail(ParseErrorKind::UnknownElement, pos_, "element has no aromatic form");
    }
    atom.element = *element;
    atom.aromatic = lower;
    pos_ += sym.size();

    // Chirality: @, @@, or @TH1-style classes.
    if (peek('@')) {
      discarded_ = true;
      ++pos_;
      if (peek('@')) {
        ++pos_;
      } else {
        for (const std::string_view cls : {"TH", "AL", "SP", "TB", "OH"}) {
          if (s_.substr(pos_, 2) == cls) {
            pos_ += 2;
            if (read_number(2) < 0) malformed("chirality class needs a number");
            break;
          }
        }
      }
    }
    if (peek('H')) {
      ++pos_;
      const int h = read_number(2);
      atom.explicit_h = h < 0 ? 1 : h;
      if (*atom.explicit_h > kMaxHydrogens) malformed("hydrogen count too large");
    }
    if (peek('+') || peek('-')) {
      const char sign = s_[pos_];
      int magnitude = 0;
      while (peek(sign)) {
        ++magnitude;
        ++pos_;
      }
      const int digits = read_number(2);
      if (digits >= 0) {
        if (magnitude != 1) malformed("charge mixes repeated signs and digits");
        magnitude = digits;
      }
      if (magnitude > kMaxCharge) malformed("charge magnitude too large");
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }
    if (peek(':')) {
      ++pos_;
      if (read_number(6) < 0) malformed("atom class needs digits");
    }
    if (!peek(']')) malformed("expected ']'");
    ++pos_;
    return add_atom(atom);
  }

  void parse_ring_closure() {
    const std::size_t start = pos_;
    int digit = 0;
    if (s_[pos_] == '%') {
      ++pos_;
      if (pos_ + 2 > s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
          !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        fail(ParseErrorKind::UnexpectedToken, start, "'%' must be followed by two digits");
      }
      digit = (s_[pos_] - '0') * 10 + (s_[pos_ + 1] - '0');
      pos_ += 2;
    } else {
      digit = s_[pos_] - '0';
      ++pos_;
    }
    if (!prev_) fail(ParseErrorKind::UnexpectedToken, start, "ring-closure digit without an atom");
    const auto order = pending_ ? pending_->explicit_order : std::nullopt;
    pending_.reset();
    const auto it = rings_.find(digit);
    if (it == rings_.end()) {
      rings_.emplace(digit, RingOpening{*prev_, order, start});
      return;
    }
    const RingOpening open = it->second;
    rings_.erase(it);
    if (open.atom == *prev_) fail(ParseErrorKind::UnexpectedToken, start, "ring closure to the same atom");
    if (open.order && order && *open.order != *order) {
      fail(ParseErrorKind::UnexpectedToken, start, "conflicting ring-closure bond symbols");
    }
    bonds_.push_back({open.atom, *prev_, open.order ? open.order : order});
  }

  MolGraph assemble() {
    // Resolve implicit bonds: aromatic between two aromatic atoms, else single.
    std::vector<Bond> bonds;
    std::vector<bool> implicit_aromatic;
    bonds.reserve(bonds_.size());
    for (const auto& pb : bonds_) {
      const bool both_aromatic = atoms_[pb.begin].aromatic && atoms_[pb.end].aromatic;
      BondOrder order = BondOrder::Single;
      if (pb.explicit_order) {
        order = *pb.explicit_order;
        if (order == BondOrder::Aromatic && !both_aromatic) {
          fail(ParseErrorKind::UnexpectedToken, 0, "aromatic bond ':' between non-aromatic atoms");
        }
      } else if (both_aromatic) {
        order = BondOrder::Aromatic;
      }
      implicit_aromatic.push_back(!pb.explicit_order && both_aromatic);
      bonds.push_back({pb.begin, pb.end, order});
    }
    enforce_aromatic_rings(bonds, implicit_aromatic);
    try {
      return MolGraph::from_parts(std::move(atoms_), std::move(bonds), discarded_);
    } catch (const InvalidGraph& e) {
      fail(ParseErrorKind::UnexpectedToken, 0, e.what());
    }
  }

  // Aromatic bonds must lie on cycles of aromatic bonds. Implicit ones that
  // bridge two aromatic systems are single; explicit ':' bridges are errors.
  // Every lowercase atom must keep at least one aromatic bond.
  void enforce_aromatic_rings(std::vector<Bond>& bonds, const std::vector<bool>& implicit_aromatic) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> edge_bond;
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      if (bonds[b].order == BondOrder::Aromatic) {
        edges.emplace_back(bonds[b].begin, bonds[b].end);
        edge_bond.push_back(b);
      }
    }
    const auto bridge = find_bridges(atoms_.size(), edges);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!bridge[e]) continue;
      const std::size_t b = edge_bond[e];
      if (!implicit_aromatic[b]) {
        fail(ParseErrorKind::AromaticOutsideRing, 0, "aromatic bond ':' outside a ring");
      }
      bonds[b].order = BondOrder::Single;
    }
    std::vector<bool> has_aromatic_bond(atoms_.size(), false);
    for (const auto& b : bonds) {
      if (b.order == BondOrder::Aromatic) has_aromatic_bond[b.begin] = has_aromatic_bond[b.end] = true;
    }
    for (const auto& a : atoms_) {
      if (a.aromatic && !has_aromatic_bond[a.index]) {
        fail(ParseErrorKind::AromaticOutsideRing, 0,
             "aromatic atom " + std::to_string(a.index) + " is not in an aromatic ring");
      }
    }
  }
};

}  // namespace

MolGraph parse_smiles(std::string_view text) { return Parser(text::trim(text)).run(); }

}  // namespace molrl::chem
