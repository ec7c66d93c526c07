#pragma once

// The thioester formation used as the running example throughout the tests.

namespace fixture {

inline constexpr const char* kWorkedRxn =
    "[O:13]=[C:12]([CH:14]1[CH2:15][CH2:16]1)[CH:11]([c:17]1[cH:18][cH:19][cH:20][cH:21][c:22]1[F:23])[N:10]1"
    "[CH2:9][CH2:8][CH:7]([SH:6])[CH2:25][CH2:24]1.[CH3:1][CH2:2][CH2:3][C:4](=[O:5])Cl>>[CH3:1][CH2:2][CH2:3]"
    "[C:4](=[O:5])[S:6][CH:7]1[CH2:8][CH2:9][N:10]([CH:11]([C:12](=[O:13])[CH:14]2[CH2:15][CH2:16]2)[c:17]2"
    "[cH:18][cH:19][cH:20][cH:21][c:22]2[F:23])[CH2:24][CH2:25]1.";

inline constexpr const char* kInstanceTemplate = "([S:6]).([C:4](=O)-Cl)>>([C:4](=O)-[S:6])";
inline constexpr const char* kCanonicalTemplate = "[S:2].[C:1](=O)-Cl>>[C:1](=O)-[S:2]";
inline constexpr const char* kSynthonAcyl = "[6*]C(=O)CCC";
inline constexpr const char* kSynthonThiol = "[4*]SC1CCN(C(C(=O)C2CC2)c2ccccc2F)CC1";
inline constexpr const char* kAcylChloride = "CCCC(=O)Cl";
inline constexpr const char* kThiol = "O=C(C1CC1)C(c1ccccc1F)N1CCC(S)CC1";
inline constexpr const char* kProduct = "CCCC(=O)SC1CCN(C(C(=O)C2CC2)c2ccccc2F)CC1";

}  // namespace fixture
