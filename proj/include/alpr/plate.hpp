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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace alpr {

inline constexpr std::size_t kPlateSlots = 7;

/// Character class set a recognizer is restricted to.
enum class CharDomain { kLetters, kDigits };

std::size_t domain_size(CharDomain d);
char domain_label(CharDomain d, std::size_t index);
std::optional<std::size_t> domain_index(CharDomain d, char label);
bool in_domain(CharDomain d, char label);
std::string_view domain_name(CharDomain d);

/// Fixed per-slot domain assignment of a plate layout. Only the Brazilian
/// LLL-DDDD layout ships.
struct PlateLayout {
  std::array<CharDomain, kPlateSlots> slots;
  std::size_t separator_after = 3;  // hyphen position in the printed form

  static const PlateLayout& brazilian();
};

/// A 7-character plate reading that always matches the layout: slots 0-2 are
/// letters, 3-6 digits.
class LPString {
 public:
  /// "AAA-0000"
  LPString() { slots_ = {'A', 'A', 'A', '0', '0', '0', '0'}; }

  /// Accepts "ABC-1234" or "ABC1234". Throws std::invalid_argument on a
  /// layout mismatch.
  static LPString parse(std::string_view text);
  static std::optional<LPString> try_parse(std::string_view text);
  static LPString from_slots(const std::array<char, kPlateSlots>& slots);

  char operator[](std::size_t i) const { return slots_[i]; }
  const std::array<char, kPlateSlots>& slots() const { return slots_; }

  /// Number of slots equal to `other`.
  std::size_t matching_slots(const LPString& other) const;

  std::string str() const;  // "ABC-1234"

  bool operator==(const LPString&) const = default;
  auto operator<=>(const LPString&) const = default;

 private:
  explicit LPString(const std::array<char, kPlateSlots>& slots) : slots_(slots) {}
  std::array<char, kPlateSlots> slots_;
};

}  // namespace alpr
