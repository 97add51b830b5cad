#include "hhj/version.hpp"

namespace hhj {

const char* library_version() { return PLATE_HHJ_VERSION; }

}  // namespace hhj
