#ifndef KERRMZI_VERSION_HPP
#define KERRMZI_VERSION_HPP

namespace kerrmzi {

inline constexpr const char* version_string = "kerrmzi 0.1.0";

}

#endif
