// Copyright 2026 The bfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bfl/errors.hpp"

namespace bfl {

struct PathPoint {
  int alpha = 0;
  double t = 0.0;

  friend bool operator==(const PathPoint&, const PathPoint&) = default;
};

enum class Ordering { time_like, space_like };

enum class PathClass { time_like, space_like, both, neither };

inline const char* to_string(Ordering o) {
  return o == Ordering::time_like ? "time_like" : "space_like";
}

inline const char* to_string(PathClass c) {
  switch (c) {
    case PathClass::time_like: return "time_like";
    case PathClass::space_like: return "space_like";
    case PathClass::both: return "both";
    case PathClass::neither: return "neither";
  }
  return "neither";
}

// Strict partial orders on (alpha, t) points.
inline bool precedes(Ordering o, const PathPoint& a, const PathPoint& b) {
  if (a == b) return false;
  if (a.t > b.t) return false;
  return o == Ordering::time_like ? a.alpha <= b.alpha : a.alpha >= b.alpha;
}

inline bool precedes_or_equal(Ordering o, const PathPoint& a, const PathPoint& b) {
  return a == b || precedes(o, a, b);
}

inline PathClass classify_path(const std::vector<PathPoint>& points) {
  if (points.size() < 2) throw InvalidArgument("classify_path needs at least two points");
  bool tl = true, sl = true;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    tl = tl && precedes(Ordering::time_like, points[i], points[i + 1]);
    sl = sl && precedes(Ordering::space_like, points[i], points[i + 1]);
  }
  if (tl && sl) return PathClass::both;
  if (tl) return PathClass::time_like;
  if (sl) return PathClass::space_like;
  return PathClass::neither;
}

enum class AccuracyFlag { ok, tail_warning };

inline const char* to_string(AccuracyFlag f) {
  return f == AccuracyFlag::ok ? "ok" : "tail_warning";
}

inline AccuracyFlag worst(AccuracyFlag a, AccuracyFlag b) {
  return (a == AccuracyFlag::tail_warning || b == AccuracyFlag::tail_warning)
             ? AccuracyFlag::tail_warning
             : AccuracyFlag::ok;
}

struct KernelValue {
  double value = 0.0;
  AccuracyFlag flag = AccuracyFlag::ok;
};

}  // namespace bfl
