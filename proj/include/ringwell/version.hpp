#ifndef RINGWELL_VERSION_HPP
#define RINGWELL_VERSION_HPP

#define RINGWELL_VERSION "0.1.0"

#endif
