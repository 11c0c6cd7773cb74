"""
Query scripts behind every verified automaton and theorem.

PRELUDE defines the shared helpers (Thue-Morse in bases 4 and 16, the
pseudopower relations p34 and p165, powers of four); conv55 and the
zeros-parity sequence R4 are seeded directly by the store.
verification_script(target) is the functionality + induction proof for one
guessed automaton; the THM_* scripts restate the theorems about them.
"""
from __future__ import annotations

from theorems.targets import Target

PRELUDE = """
morphism tm4 "0->0110 1->1001":
promote TM4 tm4:
morphism tm16 "0->0110100110010110 1->1001011001101001":
promote TM16 tm16:
reg p34 msd_3 msd_4 "([0,0]|[1,1]|[2,2])*":
reg p165 msd_16 msd_5 "([0,0]|[1,1]|[2,2]|[3,3]|[4,4])*":
reg power43 msd_4 msd_3 "[0,0]*[1,1][0,0]*":
reg pow4 msd_4 "0*10*":
"""


def _value_atom(var: str, value: int, system: str) -> str:
    if value >= 0:
        return f"?{system} {var}={value}"
    return f"?{system} {var}+{-value}=0"


def verification_script(target: Target) -> str:
    """Functionality, base case and both induction directions for `target`."""
    name, tag = target.name, target.tag
    arg, out = target.arg_system.label, target.out_system.label
    seq, index = target.sequence, target.index_term
    up, down = target.up_value, 1 - target.up_value
    h1 = int(target.table(2)[1])
    lines = [
        f'eval test{tag}_1 "An Ey ${name}(n,y)":',
        f'eval test{tag}_2 "~En,y1,y2 ${name}(n,y1) & ${name}(n,y2) & ?{out} y1!=y2":',
        f'eval test{tag}_0 "?{arg} ${name}(0, ?{out} 0) & Ex ${name}(1, ?{out} x) & {_value_atom("x", h1, out)}":',
        f'eval test{tag}_3 "?{arg} An,x (n>=1 & ${name}(n, ?{out} x) & {seq}[{index}]=@{up}) '
        f'=> ${name}(n+1, ?{out} x+1)":',
        f'eval test{tag}_4 "?{arg} An,x (n>=1 & ${name}(n, ?{out} x) & {seq}[{index}]=@{down}) '
        f'=> ${name}(n+1, ?{out} x-1)":',
    ]
    return "\n".join(lines) + "\n"


def growth_script(target: Target) -> str:
    """Positivity (where it holds) and unboundedness of the verified function."""
    name, tag = target.name, target.tag
    arg, out = target.arg_system.label, target.out_system.label
    lines = []
    if target.out_system.is_negative:
        lines.append(f'eval test{tag}_5 "?{arg} Ay En,x ${name}(n,x) & ?{out} x>y":')
        lines.append(f'eval test{tag}_6 "?{arg} Ay En,x ${name}(n,x) & ?{out} x<y":')
    else:
        if name != "mf32":
            lines.append(f'eval test{tag}_5 "?{arg} An,y (n>=1 & ${name}(n,y)) => ?{out} y>0":')
        lines.append(f'eval test{tag}_6 "?{arg} Ay En,x ${name}(n,x) & ?{out} x>y":')
    return "\n".join(lines) + "\n"


THM_B34 = """
eval bnd1 "?msd_4 An,x,m ($f30(n,x) & $p34(x,m)) => n<=m":
eval bnd2 "?msd_4 An,x,m (n>=1 & $f30(n,x) & $p34(x,m)) => 2*m+1<=3*n":
def bnd3 "?msd_4 Ex $f30(n,x) & $p34(x,n)":
def bnd4 "?msd_4 Ex,m $f30(n,x) & $p34(x,m) & 2*m+1=3*n":
"""

THM_SPECIAL_VALUES = """
eval bound1 "?msd_4 Ax,y,w,z ($power43(x,y) & 3*w=260*x+1 &
   ?msd_3 z=55*y) => $f30(w,z)":
eval bound2 "?msd_4 Ax,y,w,z ($power43(x,y) & w=2*x &
   ?msd_3 z=2*y) => $f30(w,z)":
"""

THM_F31_F32 = """
eval test31_bnd1 "?msd_4 An,x,m ($mf31(n,x) & $p34(x,m)) => n<=2*m":
eval test31_bnd2 "?msd_4 An,x,m (n>=1 & $mf31(n,x) & $p34(x,m)) => 2*m+1<=3*n":
def eq31_lower "?msd_4 Ex,m $mf31(n,x) & $p34(x,m) & n=2*m":
def eq31_upper "?msd_4 Ex,m $mf31(n,x) & $p34(x,m) & 2*m+1=3*n":
eval test32_bnd1 "?msd_4 An,x,m ($mf32(n,x) & $p34(x,m)) => 4*m<=3*n+1":
def eq32_lower "?msd_4 $mf32(n, ?msd_3 0)":
def eq32_upper "?msd_4 Ex,m $mf32(n,x) & $p34(x,m) & 4*m=3*n+1":
"""

THM_F50 = """
eval test50_bnd1 "?msd_16 An,x,m (n>=2 & $f50(n,x) & $p165(m,x)) => 47*n+140<=176*m":
eval test50_bnd2 "?msd_16 An,x,m (n>=2 & $f50(n,x) & $p165(m,x)) => 4*m+11<=15*n":
def eq50_lower "?msd_16 Ex,m n>=2 & $f50(n,x) & $p165(m,x) & 176*m=47*n+140":
def eq50_upper "?msd_16 Ex,m $f50(n,x) & $p165(m,x) & 4*m+11=15*n":
"""

THM_F51 = """
eval negvalues51 "?msd_16 An,x,y,w ((?msd_neg_5 x<0) &
   $f51(n,?msd_neg_5 x) & $conv55((?msd_neg_5 _x),?msd_5 y) &
   $p165(w,?msd_5 y)) => 2*w+3<=5*n":
def negvalues51_match "?msd_16 Ex,y,w (?msd_neg_5 x<0) &
   $f51(n,?msd_neg_5 x) & $conv55((?msd_neg_5 _x),?msd_5 y) &
   $p165(w,?msd_5 y) & 2*w+3=5*n":
def mult2 "?msd_16 x=2*y":
def mult3 "?msd_16 x=3*y":
def mult4 "?msd_16 Ez $mult2(x,z) & $mult2(z,y)":
def mult12 "?msd_16 Ez $mult3(x,z) & $mult4(z,y)":
def mult13 "?msd_16 Ez x=y+z & $mult12(z,y)":
def mult52 "?msd_16 Ez $mult4(x,z) & $mult13(z,y)":
def mult53 "?msd_16 Ez x=y+z & $mult52(z,y)":
def mult212 "?msd_16 Ez $mult4(x,z) & $mult53(z,y)":
def mult213 "?msd_16 Ez x=y+z & $mult212(z,y)":
def mult852 "?msd_16 Ez $mult4(x,z) & $mult213(z,y)":
def mult853 "?msd_16 Ez x=y+z & $mult852(z,y)":
def mult3412 "?msd_16 Ez $mult4(x,z) & $mult853(z,y)":
def pv51 "?msd_16 Ex,y (?msd_neg_5 x>=0) & $f51(n,?msd_neg_5 x)
   & $conv55((?msd_neg_5 x),?msd_5 y) & $p165(w,?msd_5 y)":
eval f51pcheck "?msd_16 An,w,t (n>=30 & $pv51(n,w) &
   $mult3412(t,w)) => t+463<=121*n":
def f51p_equal "?msd_16 Ew,t n>=30 & $pv51(n,w) & $mult3412(t,w)
   & t+463=121*n":
def f51eq0 "?msd_16 $f51(n,?msd_neg_5 0)":
"""

THM_G30 = """
eval testg30_bnd "?msd_4 An,x,m ($g30(n,x) & $p34(x,m)) => 4*m<=3*n+2":
def eqg30_upper "?msd_4 Ex,m $g30(n,x) & $p34(x,m) & 4*m=3*n+2":
def famg30_upper "?msd_4 Ex $pow4(x) & x>=4 & 3*n=x+2":
def eqg30_one "?msd_4 $g30(n, ?msd_3 1)":
def famg30_one "?msd_4 Ex $pow4(x) & 3*n=2*x+1":
"""

# equality and zero sets, as (def name, track base, regex over canonical digits)
SET_REGEXES = {
    "bnd3": (4, "(0|2)*(1|)"),
    "bnd4": (4, "1|2*3"),
    "eq31_lower": (4, "(0|1)*0"),
    "eq31_upper": (4, "1|2*3"),
    "eq32_lower": (4, "(0|2)*"),
    "eq32_upper": (4, "11*"),
    "eq50_lower": (16, "[11]*[12]"),
    "eq50_upper": (16, "1|5|44*5"),
    "negvalues51_match": (16, "6*7"),
    "f51p_equal": (16, "1[12]7|1[12]6[14]*[15]"),
    "f51eq0": (16, "((0|2)|1(7|9|[11]|[13]|[15])*(8|[10]|[12]|[14]))*"),
    "eqg30_upper": (4, "1*2"),
    "eqg30_one": (4, "1|2*3"),
}
