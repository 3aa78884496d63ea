#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

#include "molrl/fingerprints.hpp"

namespace molrl::fp {

void BitVector::set(std::size_t pos) {
  if (pos >= width_) throw std::out_of_range("bit " + std::to_string(pos) + " outside width " + std::to_string(width_));
  words_[pos / 64] |= std::uint64_t{1} << (pos % 64);
}

bool BitVector::test(std::size_t pos) const {
  if (pos >= width_) return false;
  return (words_[pos / 64] >> (pos % 64)) & 1U;
}

std::size_t BitVector::count() const {
  std::size_t n = 0;
  for (const std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> BitVector::positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) out.push_back(i);
  }
  return out;
}

double tanimoto(const BitVector& a, const BitVector& b) {
  if (a.width() != b.width()) {
    throw WidthMismatch("tanimoto of widths " + std::to_string(a.width()) + " and " + std::to_string(b.width()));
  }
  std::size_t both = 0;
  std::size_t either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
    either += static_cast<std::size_t>(std::popcount(a.words()[i] | b.words()[i]));
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0U : 1U)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

}  // namespace molrl::fp
