#include "lrpd/version.hpp"

namespace lrpd {

const char* version() noexcept { return LRPD_VERSION; }

}  // namespace lrpd
