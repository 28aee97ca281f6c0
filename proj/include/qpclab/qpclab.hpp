#ifndef QPCLAB_QPCLAB_HPP
#define QPCLAB_QPCLAB_HPP

// Umbrella header for the whole laboratory.

#include "qpclab/analysis.hpp"
#include "qpclab/attacks.hpp"
#include "qpclab/bitpair.hpp"
#include "qpclab/channel.hpp"
#include "qpclab/encoding.hpp"
#include "qpclab/keys.hpp"
#include "qpclab/party.hpp"
#include "qpclab/protocol.hpp"
#include "qpclab/quantum.hpp"
#include "qpclab/rng.hpp"
#include "qpclab/serialize.hpp"
#include "qpclab/textio.hpp"

#endif // QPCLAB_QPCLAB_HPP
