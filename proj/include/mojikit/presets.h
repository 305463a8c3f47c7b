// The bundled preset action library.

#ifndef MOJIKIT_PRESETS_H_
#define MOJIKIT_PRESETS_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "mojikit/sequence.h"

namespace mojikit {

inline constexpr std::size_t kPresetCount = 15;

class PresetLibrary {
 public:
  explicit PresetLibrary(std::vector<Sequence> presets);

  const std::vector<Sequence>& all() const { return presets_; }
  std::size_t size() const { return presets_.size(); }
  // nullptr when no preset has that name.
  const Sequence* find(std::string_view name) const;

 private:
  std::vector<Sequence> presets_;
};

// The 15 bundled presets, in a fixed order.
const PresetLibrary& load_presets();

}  // namespace mojikit

#endif  // MOJIKIT_PRESETS_H_
