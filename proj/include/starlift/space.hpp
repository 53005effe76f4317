#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace starlift {

// Reserved label for the adjoined star atom. User atoms may not carry it.
inline constexpr std::string_view kStarLabel = "@star";

// An explicit, closed, ordered set of opaque atom labels. Iteration order is
// construction order, so every enumeration in the library is reproducible.
// A space may carry one adjoined star atom, always in the last position.
class SampleSpace {
 public:
  SampleSpace() : d_(empty_data()) {}
  explicit SampleSpace(std::vector<std::string> atoms);

  // Labels "lo", "lo+1", ..., "hi".
  static SampleSpace integer_range(long lo, long hi);

  // Same atoms plus the star atom appended. Fails if already extended.
  SampleSpace star_extended() const;

  int size() const { return static_cast<int>(d_->labels.size()); }
  bool has_star() const { return d_->star; }
  int base_size() const { return size() - (has_star() ? 1 : 0); }
  int star_index() const;
  bool is_star(int i) const { return has_star() && i == size() - 1; }

  const std::string& label(int i) const { return d_->labels.at(i); }
  const std::vector<std::string>& labels() const { return d_->labels; }

  std::optional<int> find(std::string_view atom) const;
  // Throws if the atom is not in the space.
  int index_of(std::string_view atom) const;

  // Base space with the star atom stripped (identity if none).
  SampleSpace base() const;

  friend bool operator==(const SampleSpace& a, const SampleSpace& b) {
    return a.d_ == b.d_ || (a.d_->star == b.d_->star && a.d_->labels == b.d_->labels);
  }
  friend bool operator!=(const SampleSpace& a, const SampleSpace& b) { return !(a == b); }

 private:
  struct Data {
    std::vector<std::string> labels;
    std::map<std::string, int, std::less<>> index;
    bool star = false;
  };
  explicit SampleSpace(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  static std::shared_ptr<const Data> empty_data();

  std::shared_ptr<const Data> d_;
};

// Sorted atom indices; the representation of events and predicate sets.
using Event = std::vector<int>;

Event event_from_labels(const SampleSpace& space, const std::vector<std::string>& atoms);
Event complement(const SampleSpace& space, const Event& e);
bool event_contains(const Event& e, int atom);

// A total map between spaces, stored pointwise.
struct TotalMap {
  SampleSpace from;
  SampleSpace to;
  std::vector<int> image;  // image[a] = index in `to`

  TotalMap(SampleSpace from_space, SampleSpace to_space, std::vector<int> image_indices);
  static TotalMap identity(const SampleSpace& s);
  static TotalMap from_labels(const SampleSpace& from_space, const SampleSpace& to_space,
                              const std::vector<std::pair<std::string, std::string>>& pairs);
  int operator()(int a) const { return image.at(a); }
};

}  // namespace starlift
