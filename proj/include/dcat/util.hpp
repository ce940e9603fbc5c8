#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcat {

enum class Errc {
  cod_dom_mismatch,
  cod_mismatch,
  frame_mismatch,
  endpoint_mismatch,
  shape_mismatch,
  assignment_mismatch,
  missing_base_companion,
  missing_restriction,
  missing_chosen_products,
  not_composable,
  not_biadditive,
  ill_typed_word,
  missing_table_entry,
  reference_error,
  schema_error,
  syntax_error,
  invalid_argument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& msg);

inline void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

/// Escapes backslash, comma, parens and brackets so that joined labels
/// stay unambiguous when nested inside constructed labels.
std::string escape_label(const std::string& s);

/// Joins pre-escaped pieces with commas.
std::string join_escaped(const std::vector<std::string>& parts);

/// splitmix64; the PRNG behind every sampled suite. The seed-to-case
/// mapping is this generator consumed in documented order by each sampler.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Independent child stream.
  SplitMix64 split() { return SplitMix64(next() ^ 0x6a09e667f3bcc909ULL); }
};

}  // namespace dcat
