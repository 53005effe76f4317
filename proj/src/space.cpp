#include "starlift/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace starlift {

std::shared_ptr<const SampleSpace::Data> SampleSpace::empty_data() {
  static const auto d = std::make_shared<const Data>();
  return d;
}

SampleSpace::SampleSpace(std::vector<std::string> atoms) {
  auto d = std::make_shared<Data>();
  d->labels = std::move(atoms);
  for (int i = 0; i < static_cast<int>(d->labels.size()); ++i) {
    const auto& a = d->labels[i];
    if (a == kStarLabel)
      throw std::invalid_argument("atom label '" + std::string(kStarLabel) + "' is reserved");
    if (!d->index.emplace(a, i).second)
      throw std::invalid_argument("duplicate atom: " + a);
  }
  d_ = std::move(d);
}

SampleSpace SampleSpace::integer_range(long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  std::vector<std::string> atoms;
  atoms.reserve(static_cast<size_t>(hi - lo + 1));
  for (long v = lo; v <= hi; ++v) atoms.push_back(std::to_string(v));
  return SampleSpace(std::move(atoms));
}

SampleSpace SampleSpace::star_extended() const {
  if (has_star()) throw std::invalid_argument("space already star-extended");
  auto d = std::make_shared<Data>();
  d->labels = d_->labels;
  d->labels.emplace_back(kStarLabel);
  d->index = d_->index;
  d->index.emplace(std::string(kStarLabel), size());
  d->star = true;
  return SampleSpace(std::move(d));
}

SampleSpace SampleSpace::base() const {
  if (!has_star()) return *this;
  std::vector<std::string> atoms(d_->labels.begin(), d_->labels.end() - 1);
  return SampleSpace(std::move(atoms));
}

int SampleSpace::star_index() const {
  if (!has_star()) throw std::logic_error("space has no star atom");
  return size() - 1;
}

std::optional<int> SampleSpace::find(std::string_view atom) const {
  auto it = d_->index.find(atom);
  if (it == d_->index.end()) return std::nullopt;
  return it->second;
}

int SampleSpace::index_of(std::string_view atom) const {
  auto i = find(atom);
  if (!i) throw std::invalid_argument("atom not in space: " + std::string(atom));
  return *i;
}

Event event_from_labels(const SampleSpace& space, const std::vector<std::string>& atoms) {
  Event e;
  e.reserve(atoms.size());
  for (const auto& a : atoms) e.push_back(space.index_of(a));
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

Event complement(const SampleSpace& space, const Event& e) {
  Event out;
  out.reserve(space.size() - e.size());
  size_t j = 0;
  for (int i = 0; i < space.size(); ++i) {
    if (j < e.size() && e[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

bool event_contains(const Event& e, int atom) {
  return std::binary_search(e.begin(), e.end(), atom);
}

TotalMap::TotalMap(SampleSpace from_space, SampleSpace to_space, std::vector<int> image_indices)
    : from(std::move(from_space)), to(std::move(to_space)), image(std::move(image_indices)) {
  if (static_cast<int>(image.size()) != from.size())
    throw std::invalid_argument("map not total on its domain");
  for (int b : image)
    if (b < 0 || b >= to.size()) throw std::invalid_argument("map image out of range");
}

TotalMap TotalMap::identity(const SampleSpace& s) {
  std::vector<int> img(s.size());
  for (int i = 0; i < s.size(); ++i) img[i] = i;
  return TotalMap(s, s, std::move(img));
}

TotalMap TotalMap::from_labels(const SampleSpace& from_space, const SampleSpace& to_space,
                               const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<int> img(from_space.size(), -1);
  for (const auto& [a, b] : pairs) img.at(from_space.index_of(a)) = to_space.index_of(b);
  for (int v : img)
    if (v < 0) throw std::invalid_argument("map not total on its domain");
  return TotalMap(from_space, to_space, std::move(img));
}

}  // namespace starlift
