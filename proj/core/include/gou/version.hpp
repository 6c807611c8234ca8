#ifndef GOU_VERSION_HPP
#define GOU_VERSION_HPP

namespace gou {

inline constexpr const char* kToolVersion = "gouruin 1.0.0";

}

#endif
