#pragma once

namespace corrgeo {

/// Binary group tag used across pipelines: A is the reference/control group,
/// B the contrast/disease group.
enum class GroupLabel : char { A = 'A', B = 'B' };

}  // namespace corrgeo
