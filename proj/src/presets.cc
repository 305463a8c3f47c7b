#include "mojikit/presets.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace mojikit {
namespace {

using S = StructureId;

class Builder {
 public:
  explicit Builder(std::string name) { seq_.name = std::move(name); }

  Builder& block(S s, double f, double r, int speed, Millis start,
                 Millis duration, Millis delay = 0) {
    InsertResult res =
        insert_block(seq_, MotionBlock{s, f, r, speed, delay, start, duration});
    if (auto* rejected = std::get_if<InsertRejection>(&res)) {
      (void)rejected;
      throw std::logic_error("preset '" + seq_.name + "' has a conflicting block");
    }
    seq_ = std::get<Sequence>(std::move(res));
    return *this;
  }

  // Same block on both ears, mirrored in rotation.
  Builder& ears(double f, double r, int speed, Millis start, Millis duration,
                Millis delay = 0) {
    block(S::kEarLeft, f, r, speed, start, duration, delay);
    return block(S::kEarRight, f, -r, speed, start, duration, delay);
  }

  Sequence build() { return std::move(seq_); }

 private:
  Sequence seq_;
};

std::vector<Sequence> make_presets() {
  std::vector<Sequence> out;

  out.push_back(Builder("paw_lift")
                    .block(S::kLimbFrontLeft, 60, 45, 3, 0, 1200)
                    .block(S::kLimbFrontLeft, 0, 0, 3, 1200, 1000)
                    .build());

  out.push_back(Builder("nod")
                    .block(S::kHead, 25, 0, 4, 0, 700)
                    .block(S::kHead, -10, 0, 4, 700, 700)
                    .block(S::kHead, 25, 0, 4, 1400, 700)
                    .block(S::kHead, 0, 0, 4, 2100, 700)
                    .build());

  {
    Builder b("tail_wag");
    for (int i = 0; i < 6; ++i) {
      b.block(S::kTail, i % 2 == 0 ? 45 : -45, 20, 5, 500 * i, 500);
    }
    b.block(S::kTail, 0, 0, 4, 3000, 700);
    out.push_back(std::move(b).build());
  }

  out.push_back(Builder("head_turn_left")
                    .block(S::kHead, 0, 35, 3, 0, 1000)
                    .block(S::kHead, 0, 0, 3, 1500, 1000)
                    .build());

  out.push_back(Builder("head_turn_right")
                    .block(S::kHead, 0, -35, 3, 0, 1000)
                    .block(S::kHead, 0, 0, 3, 1500, 1000)
                    .build());

  {
    Builder b("head_shake");
    for (int i = 0; i < 4; ++i) {
      b.block(S::kHead, 0, i % 2 == 0 ? 30 : -30, 5, 500 * i, 500);
    }
    b.block(S::kHead, 0, 0, 4, 2000, 700);
    out.push_back(std::move(b).build());
  }

  out.push_back(Builder("ear_perk")
                    .ears(30, 10, 4, 0, 1200)
                    .ears(0, 0, 3, 1200, 900)
                    .build());

  out.push_back(Builder("ear_fold")
                    .ears(-40, 20, 3, 0, 1500)
                    .ears(0, 0, 3, 1500, 900)
                    .build());

  {
    Builder b("paw_tap");
    for (int i = 0; i < 3; ++i) {
      b.block(S::kLimbFrontRight, 45, 30, 5, 1000 * i, 500);
      b.block(S::kLimbFrontRight, 10, 0, 5, 1000 * i + 500, 500);
    }
    b.block(S::kLimbFrontRight, 0, 0, 4, 3000, 700);
    out.push_back(std::move(b).build());
  }

  out.push_back(Builder("both_paws_up")
                    .block(S::kLimbFrontLeft, 80, 60, 2, 0, 1800)
                    .block(S::kLimbFrontRight, 80, 60, 2, 0, 1800, 150)
                    .block(S::kLimbFrontLeft, 0, 0, 3, 2400, 1000)
                    .block(S::kLimbFrontRight, 0, 0, 3, 2400, 1000, 150)
                    .build());

  out.push_back(Builder("curl_up")
                    .block(S::kHead, -30, 0, 2, 0, 2000)
                    .block(S::kLimbFrontLeft, 20, 80, 2, 0, 2000, 200)
                    .block(S::kLimbFrontRight, 20, 80, 2, 0, 2000, 200)
                    .block(S::kLimbRearLeft, 20, 85, 2, 0, 2000, 400)
                    .block(S::kLimbRearRight, 20, 85, 2, 0, 2000, 400)
                    .block(S::kTail, 0, 80, 2, 0, 2000, 600)
                    .ears(-25, 0, 3, 0, 2000, 300)
                    .build());

  out.push_back(Builder("roll")
                    .block(S::kHead, 10, 40, 3, 0, 1200)
                    .block(S::kLimbFrontLeft, 70, 40, 3, 0, 1200)
                    .block(S::kLimbFrontRight, 70, 40, 3, 0, 1200, 100)
                    .block(S::kLimbRearLeft, 70, 50, 3, 0, 1200, 200)
                    .block(S::kLimbRearRight, 70, 50, 3, 0, 1200, 300)
                    .block(S::kTail, 60, 30, 3, 0, 1200)
                    .block(S::kHead, 0, 0, 3, 1800, 1000)
                    .block(S::kLimbFrontLeft, 0, 0, 3, 1800, 1000)
                    .block(S::kLimbFrontRight, 0, 0, 3, 1800, 1000)
                    .block(S::kLimbRearLeft, 0, 0, 3, 1800, 1000)
                    .block(S::kLimbRearRight, 0, 0, 3, 1800, 1000)
                    .block(S::kTail, 0, 0, 3, 1800, 1000)
                    .build());

  // Ends with every joint at 0, so it doubles as the homing action.
  out.push_back(Builder("stretch")
                    .block(S::kLimbFrontLeft, -60, 0, 2, 0, 2000)
                    .block(S::kLimbFrontRight, -60, 0, 2, 0, 2000)
                    .block(S::kLimbRearLeft, 60, 0, 2, 0, 2000, 300)
                    .block(S::kLimbRearRight, 60, 0, 2, 0, 2000, 300)
                    .block(S::kHead, 20, 0, 2, 0, 2000)
                    .block(S::kTail, 0, 45, 2, 0, 2000, 300)
                    .ears(15, 0, 3, 0, 2000)
                    .block(S::kLimbFrontLeft, 0, 0, 2, 2500, 1500)
                    .block(S::kLimbFrontRight, 0, 0, 2, 2500, 1500)
                    .block(S::kLimbRearLeft, 0, 0, 2, 2500, 1500)
                    .block(S::kLimbRearRight, 0, 0, 2, 2500, 1500)
                    .block(S::kHead, 0, 0, 2, 2500, 1500)
                    .block(S::kTail, 0, 0, 2, 2500, 1500, 200)
                    .ears(0, 0, 2, 2500, 1500, 200)
                    .build());

  out.push_back(Builder("tail_curl")
                    .block(S::kTail, 0, 90, 2, 0, 2000)
                    .block(S::kTail, 0, 0, 2, 2500, 1500)
                    .build());

  {
    Builder b("greet_combo");
    b.ears(30, 0, 4, 0, 1000);
    b.block(S::kHead, 20, 0, 4, 0, 600);
    b.block(S::kHead, -5, 0, 4, 600, 600);
    b.block(S::kHead, 20, 0, 4, 1200, 600);
    b.block(S::kHead, 0, 0, 4, 1800, 700);
    for (int i = 0; i < 5; ++i) {
      b.block(S::kTail, i % 2 == 0 ? 50 : -50, 30, 5, 300 + 500 * i, 500);
    }
    b.block(S::kTail, 0, 0, 4, 2800, 700);
    b.ears(0, 0, 3, 1800, 900);
    out.push_back(std::move(b).build());
  }

  return out;
}

}  // namespace

PresetLibrary::PresetLibrary(std::vector<Sequence> presets)
    : presets_(std::move(presets)) {}

const Sequence* PresetLibrary::find(std::string_view name) const {
  auto it = std::find_if(presets_.begin(), presets_.end(),
                         [&](const Sequence& s) { return s.name == name; });
  return it == presets_.end() ? nullptr : &*it;
}

const PresetLibrary& load_presets() {
  static const PresetLibrary library(make_presets());
  return library;
}

}  // namespace mojikit
