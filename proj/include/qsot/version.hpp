#ifndef QSOT_VERSION_HPP
#define QSOT_VERSION_HPP

namespace qsot {

inline constexpr const char* kToolVersion = "0.1.0";

}

#endif
