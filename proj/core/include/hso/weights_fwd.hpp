#pragma once

namespace hso {
class RadialWeight;
}
