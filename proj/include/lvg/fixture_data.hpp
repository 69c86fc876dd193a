#pragma once

// Generated by tools/embed_fixtures.py from fixtures/*.csv; do not edit.

#include <string_view>

namespace lvg::fixtures {

struct File {
    std::string_view name;
    std::string_view text;
};

inline constexpr File kFiles[] = {
    {"audnzd_1w", R"csv(# AUD/NZD one week: 10D put, 25D put, ATM, 25D call, 10D call at 6.14%, 5.19%, 5.14%, 5.59%, 6.49%
# strikes converted offline with premium-adjusted spot deltas and a delta-neutral straddle ATM
# inputs: S=1.0784, F=1.07845, domestic (NZD) discount 0.999712587139, T=7/365,
# foreign (AUD) discount B_d F / S = 0.99975893879827
# name=audnzd_1w
# forward=1.07845
# maturity=0.019178082191780823
# discount=0.999712587139
# spot=1.0784
strike,vol
1.0667809241251203,0.0614
1.0732377150834516,0.0519
1.078422679041507,0.0514
1.0840961438215786,0.0559
1.090962524395516,0.0649
)csv"},
    {"jackel_case1", R"csv(# manufactured smile, case I; strikes are moneyness with forward 1
# name=jackel_case1
# forward=1
# maturity=5.0722
strike,vol
0.035123777453185,0.642412798191439
0.049095433048156,0.621682849924325
0.068624781300891,0.590577891369241
0.095922580089594,0.553137221952525
0.134078990076508,0.511398042127817
0.18741338653678,0.466699250819768
0.261963320525776,0.420225808661573
0.366167980681693,0.373296313420122
0.511823524787378,0.327557513727855
0.715418426368358,0.285106482185545
1,0.249328882881654
1.39778339939642,0.228967051575314
1.95379843162821,0.220857187809035
2.73098701349666,0.218762825294675
3.81732831143284,0.218742183617652
5.33579814376678,0.218432406892364
7.45829006788743,0.217198426268117
10.4250740447762,0.21573928902421
14.5719954372667,0.214619929462215
20.3684933182917,0.2141074555437
28.4707418310251,0.21457985392644
)csv"},
    {"jackel_case2", R"csv(# manufactured smile, case II; strikes are moneyness with forward 1
# name=jackel_case2
# forward=1
# maturity=5.0722
strike,vol
0.035123777453185,0.649712512502887
0.049095433048156,0.629372247414191
0.068624781300891,0.598339248024188
0.095922580089594,0.560748840467284
0.134078990076508,0.518685454812697
0.18741338653678,0.473512707134552
0.261963320525776,0.426434688827871
0.366167980681693,0.378806875802102
0.511823524787378,0.332366264644264
0.715418426368358,0.289407658380454
1,0.253751752243855
1.39778339939642,0.235378088110653
1.95379843162821,0.235343538571543
2.73098701349666,0.260395028879884
3.81732831143284,0.31735041252779
5.33579814376678,0.368205175099723
7.45829006788743,0.417582432865276
10.4250740447762,0.46323707706565
14.5719954372667,0.504386489988866
20.3684933182917,0.539752566560924
28.4707418310251,0.566370957381163
)csv"},
    {"lognormal_A", R"csv(# flat 20% Black vols, strike set A
# name=lognormal_A
# forward=101
# maturity=0.25
strike,vol
88.77,0.2
92.85,0.2
93.38,0.2
99.37,0.2
107.99,0.2
120.29,0.2
122.03,0.2
123.9,0.2
134.71,0.2
135.43,0.2
)csv"},
    {"lognormal_B", R"csv(# flat 20% Black vols, strike set B
# name=lognormal_B
# forward=101
# maturity=0.25
strike,vol
85.02,0.2
101.92,0.2
103.55,0.2
114.45,0.2
121.85,0.2
123.69,0.2
125.07,0.2
125.58,0.2
131.63,0.2
133.86,0.2
)csv"},
    {"lognormal_C", R"csv(# flat 20% Black vols, strike set C
# name=lognormal_C
# forward=101
# maturity=0.25
strike,vol
98.07,0.2
100.93,0.2
101.06,0.2
106.88,0.2
109.12,0.2
110.93,0.2
119.76,0.2
119.83,0.2
132.19,0.2
138.27,0.2
)csv"},
    {"lognormal_D", R"csv(# flat 20% Black vols, strike set D
# name=lognormal_D
# forward=101
# maturity=0.25
strike,vol
85,0.2
90,0.2
95,0.2
100,0.2
101,0.2
105,0.2
110,0.2
115,0.2
120,0.2
130,0.2
)csv"},
    {"lognormal_flat", R"csv(# flat 20% Black vols, ten strikes
# name=lognormal_flat
# forward=1.025
# maturity=0.25
strike,vol
0.85,0.2
0.9,0.2
0.95,0.2
1,0.2
1.05,0.2
1.1,0.2
1.15,0.2
1.2,0.2
1.3,0.2
1.4,0.2
)csv"},
    {"spx_1m", R"csv(# SPX500 options, one month
# name=spx_1m
# forward=2629.80
# maturity=0.082192
strike,vol
1900,0.684883
1950,0.6548
2000,0.627972
2050,0.604067
2100,0.576923
2150,0.551253
2200,0.526025
2250,0.500435
2300,0.474137
2325,0.461716
2350,0.445709
2375,0.433661
2400,0.42016
2425,0.407463
2450,0.393168
2470,0.381405
2475,0.3793
2480,0.377109
2490,0.372471
2510,0.360294
2520,0.354671
2530,0.350533
2540,0.34419
2550,0.339273
2560,0.333069
2570,0.328206
2575,0.324314
2580,0.322041
2590,0.3168
2600,0.310914
2610,0.305042
2615,0.302416
2620,0.299488
2625,0.29609
2630,0.292378
2635,0.289516
2640,0.28584
2645,0.283342
2650,0.280853
2655,0.277035
2660,0.273715
2665,0.270891
2670,0.267889
2675,0.264533
2680,0.262344
2685,0.258598
2690,0.2555
2695,0.25219
2700,0.249534
2705,0.246659
2710,0.243553
2715,0.240202
2720,0.236588
2725,0.234574
2730,0.230407
2735,0.227866
2740,0.223049
2745,0.219888
2750,0.218498
2755,0.214702
2760,0.210506
2765,0.208175
2770,0.205508
2775,0.199967
2780,0.199007
2785,0.195062
2790,0.190547
2795,0.188427
2800,0.185893
2805,0.182878
2810,0.179292
2815,0.175001
2835,0.185751
2860,0.207173
2900,0.225248
)csv"},
    {"spx_1w", R"csv(# SPX500 options, one week; bid/ask are out-of-the-money side vol quotes
# rows with a zero bid carry weight 0.1
# name=spx_1w
# forward=2385.103981
# maturity=0.021918
strike,vol,weight,bid,ask
1800,0.58,0.1,0.00,0.61
1850,0.53,0.1,0.00,0.56
1875,0.50,0.1,0.00,0.53
1880,0.54,1,0.52,0.56
1890,0.53,1,0.51,0.55
1900,0.52,1,0.50,0.53
1910,0.49,0.1,0.00,0.52
1980,0.43,1,0.42,0.45
1990,0.43,1,0.41,0.45
2000,0.42,1,0.40,0.44
2010,0.41,1,0.39,0.43
2030,0.39,1,0.37,0.41
2035,0.38,1,0.36,0.40
2050,0.38,1,0.37,0.40
2055,0.38,1,0.36,0.39
2085,0.36,1,0.34,0.36
2090,0.35,1,0.34,0.36
2100,0.34,1,0.33,0.35
2105,0.33,1,0.32,0.34
2120,0.32,1,0.32,0.33
2125,0.32,1,0.31,0.33
2130,0.31,1,0.30,0.32
2135,0.31,1,0.30,0.31
2140,0.31,1,0.30,0.31
2150,0.29,1,0.29,0.30
2155,0.29,1,0.28,0.30
2160,0.29,1,0.28,0.30
2165,0.28,1,0.28,0.29
2175,0.27,1,0.27,0.28
2180,0.27,1,0.27,0.28
2185,0.27,1,0.26,0.27
2190,0.26,1,0.26,0.27
2195,0.26,1,0.25,0.26
2200,0.25,1,0.25,0.25
2205,0.25,1,0.25,0.25
2210,0.24,1,0.24,0.25
2215,0.24,1,0.23,0.24
2220,0.23,1,0.23,0.24
2225,0.23,1,0.22,0.23
2230,0.22,1,0.22,0.23
2235,0.22,1,0.21,0.22
2240,0.21,1,0.21,0.22
2245,0.21,1,0.21,0.21
2250,0.20,1,0.20,0.21
2255,0.20,1,0.20,0.20
2260,0.19,1,0.19,0.20
2265,0.19,1,0.19,0.19
2270,0.18,1,0.18,0.19
2275,0.18,1,0.18,0.18
2280,0.17,1,0.17,0.17
2285,0.17,1,0.17,0.17
2290,0.16,1,0.16,0.17
2295,0.16,1,0.16,0.16
2300,0.15,1,0.15,0.16
2305,0.15,1,0.15,0.15
2310,0.14,1,0.14,0.15
2315,0.14,1,0.14,0.14
2320,0.14,1,0.13,0.14
2325,0.13,1,0.13,0.13
2330,0.13,1,0.13,0.13
2335,0.12,1,0.12,0.12
2340,0.12,1,0.12,0.12
2345,0.12,1,0.11,0.12
2350,0.11,1,0.11,0.11
2355,0.11,1,0.11,0.11
2360,0.10,1,0.10,0.11
2365,0.10,1,0.10,0.10
2370,0.10,1,0.10,0.10
2375,0.09,1,0.09,0.10
2380,0.09,1,0.09,0.09
2385,0.09,1,0.09,0.09
2390,0.09,1,0.09,0.09
2395,0.09,1,0.09,0.09
2400,0.09,1,0.08,0.09
2405,0.08,1,0.08,0.09
2410,0.08,1,0.08,0.09
2415,0.08,1,0.08,0.08
2420,0.08,1,0.08,0.09
2425,0.09,1,0.08,0.09
2430,0.09,1,0.08,0.09
2435,0.09,1,0.09,0.09
2440,0.09,1,0.09,0.09
2445,0.09,1,0.09,0.09
2450,0.09,1,0.09,0.10
2455,0.10,1,0.10,0.10
2460,0.10,1,0.10,0.10
2465,0.10,1,0.10,0.11
2470,0.10,1,0.10,0.11
2475,0.11,1,0.10,0.11
2495,0.12,1,0.11,0.13
2550,0.15,0.1,0.00,0.16
)csv"},
    {"tsla_1m", R"csv(# TSLA options, one month; vols converted from percent
# name=tsla_1m
# forward=357.755926
# maturity=0.095890
strike,vol,weight
150.0,1.027152094560499,1.7320508075688772
155.0,0.9905195749900227,1.0
160.0,0.9657262376591365,1.224744871391589
165.0,0.9405597986379826,1.0
175.0,0.9181603362313814,2.738612787525831
180.0,0.9019382314978117,1.558387444947959
185.0,0.8846745842549402,1.9999999999999998
190.0,0.865754243981787,1.2602520756252087
195.0,0.8456155492434201,1.3301243435223526
200.0,0.8245634579529838,2.273030282830976
205.0,0.8028174604214972,1.3944333775567928
210.0,0.78053958851195,1.2089410496539776
215.0,0.7636802684802436,1.9999999999999998
220.0,0.7454192306685303,2.0976176963403033
225.0,0.7260651215584285,3.500000000000001
230.0,0.7058414693439228,3.286335345030995
235.0,0.6849143304434797,2.6692695630078282
240.0,0.663409356115238,2.7838821814150116
245.0,0.646230979973991,3.1622776601683804
250.0,0.6301291739261891,3.605551275463988
255.0,0.6130540004186168,3.3541019662496834
260.0,0.5946923076348443,3.0
265.0,0.5811921286363728,2.9742484506432634
270.0,0.5687314890047378,3.6469165057620923
275.0,0.5539815904720001,3.8729833462074152
280.0,0.5422671292669776,4.183300132670376
285.0,0.5338887990387771,3.7505555144093887
290.0,0.5234154661207794,4.1918287860346295
295.0,0.5168510552270313,3.7670248460125917
300.0,0.5072806473672073,4.795831523312714
305.0,0.4997973159961656,4.527692569068711
310.0,0.48965639973784664,3.482097069296032
315.0,0.4823975850368014,3.2333489534143167
320.0,0.47936818364069134,3.687817782917155
325.0,0.48000585384055006,6.3245553203367555
330.0,0.4757525564073338,6.837397165588683
335.0,0.4711478482467228,7.365459931328131
340.0,0.46788352167691083,7.0992957397195395
345.0,0.46562175169660713,7.628892449104261
350.0,0.4629965255920656,7.461009761866454
355.0,0.45939930288424485,8.706319543871567
360.0,0.458565105643866,8.78635305459552
365.0,0.45790487479637937,7.000000000000021
370.0,0.4552139844132191,7.745966692414834
375.0,0.453447302139774,8.093207028119338
380.0,0.4504013827012644,6.16441400296897
385.0,0.4480047216433579,4.974937185533098
390.0,0.4491995553643971,4.650268809434567
395.0,0.4478840707248649,4.315669125408015
400.0,0.4500659311379786,4.636809247747854
405.0,0.4517530880150887,4.732863826479693
410.0,0.4499007489879635,3.1144823004794873
415.0,0.448814967685824,2.8809720581775857
420.0,0.45160477568536983,2.8284271247461894
425.0,0.4563938928347205,2.7718093060793882
430.0,0.4600222064217672,4.092676385936223
435.0,0.46102443173801966,2.7041634565979926
440.0,0.4640646817026155,2.652259934210953
445.0,0.4709795491400157,3.710691413905333
450.0,0.476259504512801,3.777926319123662
455.0,0.4810009989573377,3.929942040850535
460.0,0.4855906965577297,3.921096785339529
465.0,0.4906446878461756,3.70809924354783
470.0,0.4960612773473766,3.517811819867573
475.0,0.5011170526132832,3.3354160160315844
480.0,0.5059204240563133,3.1622776601683777
500.0,0.5159102206249263,1.3483997249264843
520.0,0.5505625146941026,1.8929694486000912
540.0,0.5783881966646062,1.914854215512676
560.0,0.599260903580561,1.699673171197595
580.0,0.6259792014943735,1.8708286933869707
)csv"},
};

} // namespace lvg::fixtures
