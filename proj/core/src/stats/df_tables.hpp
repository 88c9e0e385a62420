#pragma once

#include <array>

namespace abm::stats::detail {

// Simulated Dickey-Fuller t quantiles, 4e5 replications for T <= 500 and
// 2e5 above. Rows are effective sample sizes, columns kDfProbs.
inline constexpr std::array<double, 19> kDfProbs{0.001, 0.005, 0.01, 0.025, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.975, 0.99, 0.995, 0.999};
inline constexpr std::array<double, 7> kDfSizes{25.0, 50.0, 100.0, 250.0, 500.0, 1000.0, 2500.0};

inline constexpr double kNoneTable[7][19] = {
    {-3.5839, -2.9425, -2.6722, -2.2743, -1.9548, -1.6085, -1.2123, -0.9388, -0.7068, -0.4743, -0.2122, 0.0822, 0.4325, 0.9216, 1.3394, 1.7044, 2.1370, 2.4353, 3.1232},
    {-3.4158, -2.8691, -2.6107, -2.2505, -1.9503, -1.6150, -1.2232, -0.9509, -0.7202, -0.4887, -0.2281, 0.0658, 0.4132, 0.9018, 1.3062, 1.6546, 2.0663, 2.3447, 2.9259},
    {-3.3435, -2.8313, -2.5878, -2.2377, -1.9428, -1.6184, -1.2289, -0.9582, -0.7276, -0.4993, -0.2366, 0.0578, 0.4071, 0.8934, 1.2905, 1.6347, 2.0377, 2.3048, 2.8890},
    {-3.2900, -2.8118, -2.5735, -2.2326, -1.9448, -1.6190, -1.2331, -0.9623, -0.7308, -0.4997, -0.2391, 0.0549, 0.4050, 0.8894, 1.2811, 1.6268, 2.0337, 2.2946, 2.8202},
    {-3.3119, -2.8077, -2.5740, -2.2282, -1.9436, -1.6182, -1.2337, -0.9648, -0.7311, -0.4988, -0.2376, 0.0556, 0.4040, 0.8862, 1.2874, 1.6319, 2.0268, 2.2901, 2.8268},
    {-3.2966, -2.8020, -2.5666, -2.2273, -1.9402, -1.6132, -1.2309, -0.9610, -0.7278, -0.4956, -0.2315, 0.0643, 0.4145, 0.8931, 1.2890, 1.6300, 2.0207, 2.2967, 2.8178},
    {-3.2951, -2.7834, -2.5584, -2.2252, -1.9351, -1.6109, -1.2309, -0.9618, -0.7295, -0.4988, -0.2388, 0.0581, 0.4085, 0.8876, 1.2872, 1.6294, 2.0354, 2.2927, 2.8235},
};

inline constexpr double kConstantTable[7][19] = {
    {-4.7142, -4.0225, -3.7268, -3.3229, -2.9884, -2.6348, -2.2341, -1.9659, -1.7411, -1.5337, -1.3255, -1.0936, -0.8009, -0.3668, 0.0028, 0.3311, 0.7237, 0.9868, 1.5560},
    {-4.3504, -3.8173, -3.5698, -3.2139, -2.9201, -2.5986, -2.2271, -1.9675, -1.7511, -1.5508, -1.3484, -1.1233, -0.8356, -0.4057, -0.0414, 0.2755, 0.6427, 0.9000, 1.4439},
    {-4.2327, -3.7371, -3.5033, -3.1659, -2.8878, -2.5812, -2.2196, -1.9688, -1.7570, -1.5573, -1.3558, -1.1323, -0.8494, -0.4244, -0.0582, 0.2587, 0.6265, 0.8818, 1.4281},
    {-4.1482, -3.6809, -3.4543, -3.1346, -2.8743, -2.5734, -2.2186, -1.9699, -1.7600, -1.5619, -1.3642, -1.1401, -0.8582, -0.4334, -0.0701, 0.2440, 0.6060, 0.8648, 1.3941},
    {-4.1301, -3.6648, -3.4414, -3.1342, -2.8697, -2.5723, -2.2200, -1.9717, -1.7612, -1.5653, -1.3657, -1.1440, -0.8624, -0.4409, -0.0762, 0.2350, 0.6122, 0.8632, 1.3984},
    {-4.1009, -3.6554, -3.4370, -3.1204, -2.8604, -2.5651, -2.2174, -1.9718, -1.7629, -1.5668, -1.3668, -1.1439, -0.8624, -0.4409, -0.0750, 0.2396, 0.6020, 0.8440, 1.3693},
    {-4.0998, -3.6454, -3.4352, -3.1232, -2.8622, -2.5677, -2.2153, -1.9720, -1.7615, -1.5652, -1.3662, -1.1451, -0.8626, -0.4380, -0.0801, 0.2273, 0.5997, 0.8581, 1.3608},
};

inline constexpr double kTrendTable[7][19] = {
    {-5.3979, -4.6891, -4.3828, -3.9454, -3.6068, -3.2429, -2.8332, -2.5587, -2.3380, -2.1396, -1.9469, -1.7439, -1.5057, -1.1466, -0.8209, -0.5287, -0.1868, 0.0502, 0.5887},
    {-4.9346, -4.4049, -4.1525, -3.7898, -3.5017, -3.1815, -2.8117, -2.5589, -2.3496, -2.1607, -1.9745, -1.7778, -1.5445, -1.1955, -0.8834, -0.5921, -0.2575, -0.0152, 0.4809},
    {-4.7758, -4.2848, -4.0586, -3.7310, -3.4533, -3.1522, -2.8006, -2.5566, -2.3561, -2.1705, -1.9888, -1.7943, -1.5633, -1.2204, -0.9081, -0.6245, -0.2847, -0.0471, 0.4333},
    {-4.6826, -4.2164, -3.9870, -3.6847, -3.4276, -3.1361, -2.7945, -2.5567, -2.3586, -2.1760, -1.9961, -1.8038, -1.5757, -1.2366, -0.9282, -0.6474, -0.3146, -0.0842, 0.3972},
    {-4.6279, -4.1877, -3.9764, -3.6786, -3.4192, -3.1317, -2.7939, -2.5587, -2.3592, -2.1768, -1.9980, -1.8065, -1.5771, -1.2399, -0.9372, -0.6582, -0.3305, -0.0974, 0.3816},
    {-4.6518, -4.1749, -3.9692, -3.6712, -3.4192, -3.1311, -2.7915, -2.5551, -2.3561, -2.1742, -1.9960, -1.8042, -1.5737, -1.2359, -0.9276, -0.6506, -0.3122, -0.0911, 0.3862},
    {-4.5796, -4.1547, -3.9574, -3.6591, -3.4109, -3.1291, -2.7933, -2.5603, -2.3643, -2.1818, -2.0014, -1.8098, -1.5857, -1.2495, -0.9441, -0.6626, -0.3106, -0.0832, 0.3890},
};

}  // namespace abm::stats::detail
