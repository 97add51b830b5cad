#pragma once

namespace hhj {

// Library version string, e.g. "0.1.0".
const char* library_version();

}  // namespace hhj
