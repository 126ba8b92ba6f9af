#ifndef XAFCM_XAFCM_HPP
#define XAFCM_XAFCM_HPP

#include "xafcm/classify.hpp"
#include "xafcm/core.hpp"
#include "xafcm/error.hpp"
#include "xafcm/matrix.hpp"
#include "xafcm/model.hpp"
#include "xafcm/nrc.hpp"
#include "xafcm/quantize.hpp"
#include "xafcm/synthetic.hpp"

#endif  // XAFCM_XAFCM_HPP
