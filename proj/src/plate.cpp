/*
 Copyright 2026 The alpr-cascade Authors.
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "alpr/plate.hpp"

#include <stdexcept>

namespace alpr {

std::size_t domain_size(CharDomain d) { return d == CharDomain::kLetters ? 26 : 10; }

char domain_label(CharDomain d, std::size_t index) {
  if (index >= domain_size(d)) throw std::out_of_range("class index out of range");
  return static_cast<char>((d == CharDomain::kLetters ? 'A' : '0') + index);
}

std::optional<std::size_t> domain_index(CharDomain d, char label) {
  if (d == CharDomain::kLetters && label >= 'A' && label <= 'Z') return std::size_t(label - 'A');
  if (d == CharDomain::kDigits && label >= '0' && label <= '9') return std::size_t(label - '0');
  return std::nullopt;
}

bool in_domain(CharDomain d, char label) { return domain_index(d, label).has_value(); }

std::string_view domain_name(CharDomain d) { return d == CharDomain::kLetters ? "letters" : "digits"; }

const PlateLayout& PlateLayout::brazilian() {
  static const PlateLayout layout{{CharDomain::kLetters, CharDomain::kLetters, CharDomain::kLetters,
                                   CharDomain::kDigits, CharDomain::kDigits, CharDomain::kDigits,
                                   CharDomain::kDigits},
                                  3};
  return layout;
}

std::optional<LPString> LPString::try_parse(std::string_view text) {
  const auto& layout = PlateLayout::brazilian();
  std::string compact;
  if (text.size() == kPlateSlots + 1 && text[layout.separator_after] == '-') {
    compact = std::string(text.substr(0, layout.separator_after)) + std::string(text.substr(layout.separator_after + 1));
  } else if (text.size() == kPlateSlots) {
    compact = std::string(text);
  } else {
    return std::nullopt;
  }
  std::array<char, kPlateSlots> slots{};
  for (std::size_t i = 0; i < kPlateSlots; ++i) {
    if (!in_domain(layout.slots[i], compact[i])) return std::nullopt;
    slots[i] = compact[i];
  }
  return LPString(slots);
}

LPString LPString::parse(std::string_view text) {
  auto p = try_parse(text);
  if (!p) throw std::invalid_argument("plate '" + std::string(text) + "' does not match layout LLL-DDDD");
  return *p;
}

LPString LPString::from_slots(const std::array<char, kPlateSlots>& slots) {
  const auto& layout = PlateLayout::brazilian();
  for (std::size_t i = 0; i < kPlateSlots; ++i) {
    if (!in_domain(layout.slots[i], slots[i])) {
      throw std::invalid_argument("slot " + std::to_string(i + 1) + " holds '" + std::string(1, slots[i]) +
                                  "', outside its " + std::string(domain_name(layout.slots[i])) + " domain");
    }
  }
  return LPString(slots);
}

std::size_t LPString::matching_slots(const LPString& other) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kPlateSlots; ++i) n += slots_[i] == other.slots_[i];
  return n;
}

std::string LPString::str() const {
  const auto sep = PlateLayout::brazilian().separator_after;
  std::string s(slots_.begin(), slots_.begin() + sep);
  s += '-';
  s.append(slots_.begin() + sep, slots_.end());
  return s;
}

}  // namespace alpr
