// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/channel.hpp"

namespace shadowsec {

// Source -> P relays -> Q receivers with W eavesdroppers listening to the relays.
struct NetworkConfig {
    int relays = 1;        // P
    int receivers = 1;     // Q
    int eavesdroppers = 1; // W
    int antennas_rx = 1;   // G_Q
    int antennas_eve = 1;  // G_W
    FadingParams hop_sp;   // source -> relay
    FadingParams hop_pq;   // relay -> receiver
    FadingParams hop_pw;   // relay -> eavesdropper

    void validate() const;
};

} // namespace shadowsec
