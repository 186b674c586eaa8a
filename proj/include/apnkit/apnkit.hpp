#pragma once

#include "apnkit/natural.hpp"
#include "apnkit/verdict.hpp"
#include "apnkit/primality.hpp"
#include "apnkit/factor.hpp"
#include "apnkit/ntcore.hpp"
#include "apnkit/chain.hpp"
#include "apnkit/bounds.hpp"
#include "apnkit/certs.hpp"
#include "apnkit/certs_io.hpp"
#include "apnkit/base2_certificate.hpp"
#include "apnkit/search.hpp"
