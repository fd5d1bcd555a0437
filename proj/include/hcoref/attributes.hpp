#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>

#include "hcoref/corpus.hpp"

namespace hcoref {

enum class Number { Singular, Plural };
enum class Person { First, Second, Third };
enum class Gender { Masc, Fem, Neut };

// A set of enum values stored as a bitmask. The empty set means "unknown".
template <typename E>
class ValueSet {
 public:
  constexpr ValueSet() = default;
  constexpr ValueSet(std::initializer_list<E> values) {
    for (E v : values) insert(v);
  }

  static constexpr ValueSet from_bits(std::uint8_t bits) {
    ValueSet s;
    s.bits_ = bits;
    return s;
  }

  constexpr void insert(E v) { bits_ |= bit(v); }
  constexpr bool contains(E v) const { return (bits_ & bit(v)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool intersects(ValueSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  constexpr ValueSet operator|(ValueSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr ValueSet& operator|=(ValueSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr bool operator==(const ValueSet&) const = default;

 private:
  static constexpr std::uint8_t bit(E v) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
  }
  std::uint8_t bits_ = 0;
};

// Number/animacy/person/gender value sets of a mention or an entity. Merging
// two entities takes the union of each set, so a cluster formed from a
// singular and a plural mention accepts both singular and plural pronouns.
struct AttributeLattice {
  ValueSet<Number> number;
  ValueSet<Animacy> animacy;  // only Animate/Inanimate are ever inserted
  ValueSet<Person> person;
  ValueSet<Gender> gender;

  AttributeLattice& unite(const AttributeLattice& o) {
    number |= o.number;
    animacy |= o.animacy;
    person |= o.person;
    gender |= o.gender;
    return *this;
  }

  bool operator==(const AttributeLattice&) const = default;
};

inline AttributeLattice unite(AttributeLattice a, const AttributeLattice& b) {
  return a.unite(b);
}

// Three-valued agreement of two value sets: unknown when either is empty.
enum class Agreement { Disagree = 0, Agree = 1, Unknown = 2 };

template <typename E>
Agreement agreement(ValueSet<E> a, ValueSet<E> b) {
  if (a.empty() || b.empty()) return Agreement::Unknown;
  return a.intersects(b) ? Agreement::Agree : Agreement::Disagree;
}

std::string to_string(const AttributeLattice& attrs);

}  // namespace hcoref
