// Frozen summary CSV for the fixed-seed 20-record run in test_persistence.
// Regenerate with SSK_REGEN_GOLDEN=1 ./ssk_unit_tests and paste the bytes.
#pragma once

inline const char* kGoldenSummaryCsv =
    "n,beta,alpha,q,samples,errors,y_mean,y_var,y_skew,xq_norm_mean,xq_norm_var,xq_norm_skew,lambda1_mean,lambda1_var,lambda1_skew,tw_mean,tw_var,tw_skew,ks_y_normal,ks_xq_normal,ks_lambda1_tw1\n"
    "50,1,0,5,20,0,-0.37836805852072958,1.0338782243817719,-0.33697189172220049,-3.3072022048723362,0.17318022936688413,-0.33452755032792325,-1.2541994733967985,1.0256832997288037,-0.33717882041287189,,,,0.19598260131396339,0.99497692674487259,\n";
