# 此文件集中管理所有用户可见文本（命令行帮助、错误信息、审计说明）

APP_TITLE = "Sugeno 积分与 Pólya-Knopp / Hardy-Knopp 型不等式数值校验工具"
APP_NAME = "sugeno-knopp"

# ---------- 命令行帮助 ----------
HELP_MAIN = APP_TITLE + "。输出 JSON 报告；退出码 0=成立 1=不等式被违反 2=输入错误 3=数值失败。"
HELP_INTEGRATE = "计算单个积分（Sugeno 积分或经典积分）。"
HELP_INTEGRATE_SUGENO = "计算 Sugeno 积分，输出不动点证书。"
HELP_INTEGRATE_RIEMANN = "计算经典（Riemann）积分，开型自适应求积。"
HELP_CHECK = "校验一条不等式：pk1 | pk2 | gpk | hk | jensen。"
HELP_SWEEP = "在随机函数族上批量校验不等式。"
HELP_PAPER_EXAMPLES = "复现并审计两个文献算例（打印值与计算值对照）。"
HELP_EMIT_PLOT = "输出分布函数曲线 CSV：alpha,F_alpha,min_alpha_F。"

OPT_F = "被积函数表达式（变量 x），例如 \"x/2\"、\"exp(1/x)\"。"
OPT_PHI = "凸核 φ 的表达式（hk 用）。"
OPT_BIJ = "双射 F 的表达式（gpk 用），其逆由二分数值求得。"
OPT_INNER = "gpk 的内层积分类型：riemann 或 sugeno。"
OPT_DOMAIN = "积分区间端点 A B。"
OPT_MEASURE = "测度：uniform | reciprocal | density:<expr>。"
OPT_TOL = "Sugeno 求解容差（默认 {default}）。"
OPT_QUAD_TOL = "求积容差（默认 {default}）。"
OPT_VIOLATION_TOL = "判定违反的容差（默认 {default}）。"
OPT_SCAN_POINTS = "水平集扫描点数（默认 {default}）。"
OPT_ROOT_TOL = "水平集边界二分容差（默认 {default}）。"
OPT_CAP = "α 上限（默认 {default}）。"
OPT_FORMAT = "输出格式：json 或 csv。"
OPT_OUT = "输出文件路径（缺省为标准输出）。"
OPT_FAMILY = "函数族名称。"
OPT_TRIALS = "试验次数。"
OPT_SEED = "随机种子（64 位无符号整数）。"
OPT_JOBS = "并行进程数（默认：可用处理器数）。"
OPT_LOG_LEVEL = "日志级别（DEBUG/INFO/WARNING/ERROR）。"
OPT_POINTS = "α 网格点数（默认 {default}）。"
OPT_BASE = "shifted 族的底族（默认 {default}）。"
OPT_GPK_MEASURE = "gpk 的外层测度：uniform 或 reciprocal（dx/x）。"
ERR_PREFIX = "错误："
ERR_ABORTED = "运行被中止，未产生结果"

# ---------- 错误信息 ----------
ERR_EMPTY_EXPR = "表达式不能为空"
ERR_SYNTAX = "语法错误（位置 {position}）：{detail}"
ERR_UNEXPECTED_CHAR = "无法识别的字符 '{char}'"
ERR_EXPECTED = "期望 {expected}，实际为 {found}"
ERR_UNKNOWN_IDENTIFIER = "未知标识符 '{name}'（位置 {position}）"
ERR_END_OF_INPUT = "输入结尾"
EXPECTED_OPERAND = "数字、x、函数或 '('"
ERR_TOO_DEEP = "表达式嵌套超过 {limit} 层"
ERR_TREE_TOO_DEEP = "表达式树深度 {depth} 超过上限 {limit}"
ERR_NON_FINITE_LITERAL = "数字 '{text}' 超出浮点数范围"
ERR_OUT_OF_DOMAIN = "表达式 {node} 在 x={x!r} 处越界：{reason}"
ERR_REASON_DIV_ZERO = "除数为零"
ERR_REASON_LN_DOMAIN = "ln 的自变量非正"
ERR_REASON_NAN = "结果为 NaN"
ERR_EVAL_RUN = "被积函数在 [{lo}, {hi}] 上的正测度子集越界：{detail}"
ERR_INVALID_INTERVAL = "区间非法：lo={lo}, hi={hi}（要求 0 ≤ lo ≤ hi）"
ERR_INFINITE_DOMAIN = "积分区间必须有限：[{lo}, {hi}]"
ERR_INVALID_MEASURE = "测度描述非法：'{text}'（应为 uniform | reciprocal | density:<expr>）"
ERR_NEGATIVE_DENSITY = "密度 {density} 在 x={x!r} 处为负或越界"
ERR_DENSITY_UNBOUNDED = "密度测度不支持无界区间 [{lo}, {hi}]"
ERR_TOL_POSITIVE = "容差必须为正：{name}={value}"
ERR_NEGATIVE_ALPHA = "α 必须非负：{alpha}"
ERR_SCAN_POINTS = "scan_points 至少为 2：{value}"
ERR_BAD_BOUNDS = "积分上下限非法：a={a}, b={b}（要求 a < b 且有限）"
ERR_DIVERGENCE = "求积不收敛（疑似发散），部分值 {partial}，误差估计 {error}"
ERR_X_POSITIVE = "x 必须为正：{x}"
ERR_CAP_REACHED = "测度 {measure} 与被积函数上界 {sup} 均超过上限 {cap}"
ERR_GRID_N = "oracle 网格点数至少为 2：{value}"
ERR_BIJECTION = "F 在相关区间上不是严格单调函数：{detail}"
ERR_BIJECTION_RANGE = "无法为 y={y!r} 找到 F 的逆像"
ERR_HK_DOMAIN = "Hardy-Knopp 校验要求 0 < a < b：a={a}, b={b}"
ERR_B_POSITIVE = "右端点 b 必须为正：{b}"
ERR_REJECTION_BUDGET = "函数族 {family} 的拒绝预算已耗尽（已接受 {accepted}/{count}）"
ERR_BAD_RANGE = "参数区间非法：{name}={value}"
ERR_UNSUPPORTED_SWEEP = "不支持对 {ineq} 做批量校验"
ERR_MISSING_OPTION = "{command} 需要参数 {option}"
ERR_RECIPROCAL_DOMAIN = "倒数测度 dx/x 要求区间左端点为正：a={a}"
ERR_DOMAIN_FROM_ZERO = "{ineq} 的区间必须从 0 开始：[{lo}, {hi}]"
ERR_BIJECTION_SEED = "F 在种子点 {seeds} 处都无定义，无法确定逆像的搜索区间"
ERR_BIJECTION_FLAT = "F 在 z={z!r} 右侧为常数或无定义，无法判定单调方向"

# ---------- 报告说明 ----------
NOTE_PK1_FACTOR_E = "按右端不带因子 e 的形式校验；带因子 e 的较弱形式是否成立见 details.holds_with_factor_e。"
NOTE_NOT_NONDECREASING = "f 在探测网格上不是单调不减，不等式的前提不满足。"
NOTE_NOT_POSITIVE = "f 在探测网格上存在非正值，ln f 无定义。"
NOTE_INNER_NEGATIVE = "内层被积函数 {inner} 在探测网格上出现负值；Sugeno 积分的定义只覆盖非负函数，此处为越界应用。"
NOTE_PK2_CASE1 = "q = e·SINT f = {q!r} > e：证明的第一种情形，左端 ≤ e < q。"
NOTE_PK2_CASE2 = "q = e·SINT f = {q!r} ≤ e：证明的第二种情形，证明给出的上界 g(q)（α·ln α = ln q 的根）= {bound}。"
NOTE_INNER_DT = "推广形式的内层积分以 t 为积分变量（内层微分取 dt）。"
NOTE_GPK_MEASURE = "外层测度：{measure}。"
NOTE_HK_NOT_CONVEX = "φ 在探测范围上的三点中点凸性检验失败。"
NOTE_HK_NOT_POSITIVE = "φ 在探测范围上存在非正值。"
NOTE_JENSEN_EXPLORATORY = "探索性探针：Jensen 型不等式 exp(SINT g) ≤ SINT exp(g) 没有已知证明；违反只是数据，不是缺陷。"
NOTE_TAIL_VALUE = "截断区间 [{lo}, {hi}]；尾端值 f({hi}) = {tail!r}，截断能否掩盖大 x 处的违反未作判定。"
NOTE_INNER_SHAPE = "内层被积函数形状：{shape}。"

# ---------- 文献算例审计 ----------
AUDIT_EXAMPLE_PK1 = (
    "算例一（f = x/2，区间 [0,5]）：文献打印 左端 5/(2e+1)=0.781，右端 5/3=1.6；"
    "精确分数 5/(1+2e) = {lhs_exact!r}，5/3 = {rhs_exact!r}；"
    "计算值 左端 {lhs!r}，右端 {rhs!r}。0.781 是文献的舍入错误，1.6 是截断。"
)
AUDIT_EXAMPLE_PK2 = (
    "算例二（f = exp(1/x)，区间 [0,5]）：文献断言 SINT exp(1/x) = e，即 左端 e，右端 e×e；"
    "分布函数 F(α) = min(5, 1/ln α) 与对角线的交点是 α·ln α = 1 的根 {root!r}（独立二分求得），而非 e = {e!r}；"
    "计算值 左端 {lhs!r}，右端 {rhs!r}。不等式方向不受影响。"
)
AUDIT_INTEGRAL = "文献算例中的积分：文献打印 {printed}，精确值 {exact_label} = {exact!r}；计算值 {value!r}。"
