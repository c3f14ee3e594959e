#pragma once

#include <string>
#include <vector>

// Readings and ground-truth answers of the two published trend-analysis
// examples.
namespace golden {

inline const std::vector<double> kLeftAnkleReadings = {
    -9.8237, -9.4551, -10.007, -11.273, -11.258, -11.677, -11.774, -11.638, -11.195, -11.087, -10.833,
    -11.044, -11.393, -11.943, -12.168, -15.455, -12.967, -12.326, -12.515, -13.195, -12.634, -11.873,
    -12.002, -11.583, -10.859, -10.349, -9.831,  -9.1622, -8.2721, -6.9299, -6.255,  -5.5998};

inline const std::vector<double> kRightArmGyroReadings = {0.53137, 0.53137, 0.53137, 0.51176, 0.51176,
                                                          0.51176, 0.45098, 0.45098, 0.45098, 0.45098,
                                                          0.45882, 0.45882, 0.45882};

inline const std::string kLeftAnkleTruth =
    "0.0 seconds to 0.02 seconds: growing\n"
    "0.02 seconds to 0.06 seconds: declining\n"
    "0.06 seconds to 0.08 seconds: growing\n"
    "0.08 seconds to 0.12 seconds: declining\n"
    "0.12 seconds to 0.2 seconds: growing\n"
    "0.2 seconds to 0.3 seconds: declining\n"
    "0.3 seconds to 0.34 seconds: growing\n"
    "0.34 seconds to 0.38 seconds: declining\n"
    "0.38 seconds to 0.42 seconds: growing\n"
    "0.42 seconds to 0.44 seconds: declining\n"
    "0.44 seconds to 0.62 seconds: growing\n"
    "\n"
    "Total growing trends: 6\n"
    "Total declining trends: 5\n"
    "\n"
    "From 0.0s to 0.62s, normalized left-ankle y-axis accelerometer data is showcased in the sensor data. "
    "Examining the data, we notice 2 clear trend characteristics, with the trend fluctuating a total of eleven "
    "times. The analysis reveals that the data's declining inclination persisted for a total of 0.24 seconds, and "
    "a growing trend within a span of 0.38 seconds. The general trend observed is growing.";

inline const std::string kLeftAnkleModelOutput =
    "0.0 to 0.02 seconds: ascending\n"
    "0.02 to 0.08 seconds: descending\n"
    "0.08 to 0.1 seconds: ascending\n"
    "0.1 to 0.12 seconds: descending\n"
    "0.12 to 0.2 seconds: ascending\n"
    "0.2 to 0.28 seconds: descending\n"
    "0.28 to 0.32 seconds: ascending\n"
    "0.32 to 0.36 seconds: descending\n"
    "0.36 to 0.4 seconds: ascending\n"
    "0.4 to 0.42 seconds: descending\n"
    "0.42 to 0.62 seconds: ascending\n"
    "\n"
    "Count of ascending segments: 6\n"
    "Count of descending segments: 5\n"
    "\n"
    "The time series data encapsulates normalized left-ankle y-axis accelerometer sensor readings from 0.0 "
    "seconds to 0.62 seconds. Two separate trends and nine trend shifts are observed in the data. The analysis "
    "reveals that the data's descending inclination persisted for a total of 0.22 seconds, and an ascending trend "
    "for a sum of 0.40 seconds. The trend overall is ascending.";

inline const std::string kLeftAnkleGptOutput =
    "0.0s to 0.02s: rising\n"
    "0.02s to 0.06s: falling\n"
    "0.06s to 0.08s: rising\n"
    "0.08s to 0.1s: falling\n"
    "0.1s to 0.12s: rising\n"
    "0.12s to 0.14s: falling\n"
    "0.14s to 0.3s: rising\n"
    "\n"
    "Total rising segments: 4\n"
    "Total falling segments: 3\n"
    "\n"
    "The normalized left-ankle y-axis accelerometer sensor readings recorded within the 0.0 to 0.3 second "
    "timeframe are presented in this sensor data. The input data displays three individual trends, with a "
    "comprehensive change count reaching 7. The examination reveals that the data's falling inclination endured "
    "for an aggregate of 0.08 seconds, succeeded by a rising trend for a cumulative period of 0.22 seconds, and a "
    "steady pattern for a total of 0.00 seconds. The dominant trend is rising.";

inline const std::string kRightArmTruth =
    "0.0 seconds to 0.04 seconds: stable\n"
    "0.04 seconds to 0.06 seconds: decreasing\n"
    "0.06 seconds to 0.1 seconds: stable\n"
    "0.1 seconds to 0.12 seconds: decreasing\n"
    "0.12 seconds to 0.18 seconds: stable\n"
    "0.18 seconds to 0.2 seconds: increasing\n"
    "0.2 seconds to 0.24 seconds: stable\n"
    "\n"
    "Number of stable trends: 4\n"
    "Number of decreasing trends: 2\n"
    "Number of increasing trends: 1\n"
    "\n"
    "The sensor data represents readings taken from a normalized right-lower-arm x-axis gyroscope sensor between "
    "0.0 and 0.24 seconds. Analysis reveals three separate trends within the data, undergoing a cumulative total "
    "of seven shifts in direction. Encapsulating the outcomes, the data's decreasing trend stretched across a "
    "total time of 0.04 seconds, came after an increasing pattern observed over 0.02 seconds, and a stable trend "
    "for 0.18 seconds in total. The dominant trend is decreasing.";

inline const std::string kRightArmModelOutput =
    "0.0s to 0.04s: consistent\n"
    "0.04s to 0.06s: downward\n"
    "0.06s to 0.1s: consistent\n"
    "0.1s to 0.12s: downward\n"
    "0.12s to 0.18s: consistent\n"
    "0.18s to 0.2s: upward\n"
    "0.2s to 0.24s: consistent\n"
    "\n"
    "Number of consistent segments: 4\n"
    "Number of downward segments: 2\n"
    "Number of upward segments: 1\n"
    "\n"
    "The sensor data illustrates normalized right-lower-arm x-axis gyroscope sensor readings between 0.0 and "
    "0.24 seconds. The input data displays three individual trends, with a comprehensive change count reaching "
    "7. To encapsulate, the data's downward trend spanned a combined duration of 0.04 seconds, and then an "
    "upward pattern for a sum of 0.02 seconds, and a consistent trend for an accumulated time of 0.18 seconds. "
    "The overarching trend is characterized as downward.";

inline const std::string kRightArmGptOutput =
    "0.0s to 0.06s: steady\n"
    "0.06s to 0.12s: falling\n"
    "0.12s to 0.14s: steady\n"
    "0.14s to 0.16s: rising\n"
    "0.16s to 0.18s: steady\n"
    "\n"
    "Total steady segments: 3\n"
    "Total rising segments: 1\n"
    "Total falling segments: 1\n"
    "\n"
    "The normalized right-lower-arm x-axis gyroscope sensor readings recorded within the 0.0 to 0.18 second "
    "timeframe are presented in this sensor data. The input data displays three individual trends, with a "
    "comprehensive change count reaching 5. The examination reveals that the data's falling inclination endured "
    "for an aggregate of 0.06 seconds, succeeded by a rising trend for a cumulative period of 0.02 seconds, and a "
    "steady pattern for a total of 0.10 seconds. The dominant trend is steady.";

}  // namespace golden
