#pragma once

namespace lrpd {

/// Library version string, e.g. "0.1.0".
const char* version() noexcept;

}  // namespace lrpd
