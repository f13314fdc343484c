#include "cbohf/basis.hpp"

namespace cbohf::detail {

// Basis Set Exchange data (NWChem format), elements H-Ne.

const char* const kSto3g = R"BASIS(
#BASIS SET: (3s) -> [1s]
H    S
      3.42525091             0.15432897
      0.62391373             0.53532814
      0.16885540             0.44463454
#BASIS SET: (3s) -> [1s]
He    S
      6.36242139             0.15432897
      1.15892300             0.53532814
      0.31364979             0.44463454
#BASIS SET: (6s,3p) -> [2s,1p]
Li    S
     16.1195750              0.15432897
      2.9362007              0.53532814
      0.7946505              0.44463454
Li    SP
      0.6362897             -0.09996723             0.15591627
      0.1478601              0.39951283             0.60768372
      0.0480887              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
Be    S
     30.1678710              0.15432897
      5.4951153              0.53532814
      1.4871927              0.44463454
Be    SP
      1.3148331             -0.09996723             0.15591627
      0.3055389              0.39951283             0.60768372
      0.0993707              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
B    S
     48.7911130              0.15432897
      8.8873622              0.53532814
      2.4052670              0.44463454
B    SP
      2.2369561             -0.09996723             0.15591627
      0.5198205              0.39951283             0.60768372
      0.1690618              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
C    S
     71.6168370              0.15432897
     13.0450960              0.53532814
      3.5305122              0.44463454
C    SP
      2.9412494             -0.09996723             0.15591627
      0.6834831              0.39951283             0.60768372
      0.2222899              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
N    S
     99.1061690              0.15432897
     18.0523120              0.53532814
      4.8856602              0.44463454
N    SP
      3.7804559             -0.09996723             0.15591627
      0.8784966              0.39951283             0.60768372
      0.2857144              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
O    S
    130.7093200              0.15432897
     23.8088610              0.53532814
      6.4436083              0.44463454
O    SP
      5.0331513             -0.09996723             0.15591627
      1.1695961              0.39951283             0.60768372
      0.3803890              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
F    S
    166.6791300              0.15432897
     30.3608120              0.53532814
      8.2168207              0.44463454
F    SP
      6.4648032             -0.09996723             0.15591627
      1.5022812              0.39951283             0.60768372
      0.4885885              0.70011547             0.39195739
#BASIS SET: (6s,3p) -> [2s,1p]
Ne    S
    207.0156100              0.15432897
     37.7081510              0.53532814
     10.2052970              0.44463454
Ne    SP
      8.2463151             -0.09996723             0.15591627
      1.9162662              0.39951283             0.60768372
      0.6232293              0.70011547             0.39195739
#BASIS SET: (9s,6p) -> [3s,2p]
)BASIS";

const char* const k631g = R"BASIS(
#BASIS SET: (4s) -> [2s]
H    S
     18.7311370              0.03349460
      2.8253937              0.23472695
      0.6401217              0.81375733
H    S
      0.1612778              1.0000000
#BASIS SET: (4s) -> [2s]
He    S
     38.4216340              0.0237660
      5.7780300              0.1546790
      1.2417740              0.4696300
He    S
      0.2979640              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
Li    S
    642.4189200              0.0021426
     96.7985150              0.0162089
     22.0911210              0.0773156
      6.2010703              0.2457860
      1.9351177              0.4701890
      0.6367358              0.3454708
Li    SP
      2.3249184             -0.0350917              0.0089415
      0.6324306             -0.1912328              0.1410095
      0.0790534              1.0839878              0.9453637
Li    SP
      0.0359620              1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
Be    S
   1264.5857000              0.0019448
    189.9368100              0.0148351
     43.1590890              0.0720906
     12.0986630              0.2371542
      3.8063232              0.4691987
      1.2728903              0.3565202
Be    SP
      3.1964631             -0.1126487              0.0559802
      0.7478133             -0.2295064              0.2615506
      0.2199663              1.1869167              0.7939723
Be    SP
      0.0823099              1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
B    S
   2068.8823000              0.0018663
    310.6495700              0.0142515
     70.6830330              0.0695516
     19.8610800              0.2325729
      6.2993048              0.4670787
      2.1270270              0.3634314
B    SP
      4.7279710             -0.1303938              0.0745976
      1.1903377             -0.1307889              0.3078467
      0.3594117              1.1309444              0.7434568
B    SP
      0.1267512              1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
C    S
   3047.5249000              0.0018347
    457.3695100              0.0140373
    103.9486900              0.0688426
     29.2101550              0.2321844
      9.2866630              0.4679413
      3.1639270              0.3623120
C    SP
      7.8682724             -0.1193324              0.0689991
      1.8812885             -0.1608542              0.3164240
      0.5442493              1.1434564              0.7443083
C    SP
      0.1687144              1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
N    S
   4173.5110000              0.0018348
    627.4579000              0.0139950
    142.9021000              0.0685870
     40.2343300              0.2322410
     12.8202100              0.4690700
      4.3904370              0.3604550
N    SP
     11.6263580             -0.1149610              0.0675800
      2.7162800             -0.1691180              0.3239070
      0.7722180              1.1458520              0.7408950
N    SP
      0.2120313              1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
O    S
   5484.6717000              0.0018311
    825.2349500              0.0139501
    188.0469600              0.0684451
     52.9645000              0.2327143
     16.8975700              0.4701930
      5.7996353              0.3585209
O    SP
     15.5396160             -0.1107775              0.0708743
      3.5999336             -0.1480263              0.3397528
      1.0137618              1.1307670              0.7271586
O    SP
      0.2700058              1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
F    S
   7001.7130900              0.0018196169
   1051.3660900              0.0139160796
    239.2856900              0.0684053245
     67.3974453              0.233185760
     21.5199573              0.471267439
      7.40310130             0.356618546
F    SP
     20.8479528             -0.108506975            0.0716287243
      4.80830834            -0.146451658            0.3459121030
      1.34406986             1.128688580            0.7224699570
F    SP
      0.358151393            1.0000000              1.0000000
#BASIS SET: (10s,4p) -> [3s,2p]
Ne    S
   8425.8515300              0.0018843481
   1268.5194000              0.0143368994
    289.6214140              0.0701096233
     81.8590040              0.2373732660
     26.2515079              0.4730071260
      9.09472051             0.3484012410
Ne    SP
     26.5321310             -0.107118287            0.0719095885
      6.10175501            -0.146163821            0.3495133720
      1.69627153             1.127773500            0.7199405120
Ne    SP
      0.44581870             1.0000000              1.0000000
#BASIS SET: (16s,10p) -> [4s,3p]
)BASIS";

}  // namespace cbohf::detail
