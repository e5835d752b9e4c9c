# 默认参数集中定义，命令行 --help 与报告中的 config 均引用这里的值

VERSION = "1.0.0"

# 求积
QUAD_TOL = 1e-9
QUAD_MAX_SUBDIVISIONS = 2000
QUAD_MAX_GEOMETRIC_PANELS = 200

# 水平集
SCAN_POINTS = 4096
ROOT_TOL = 1e-12
PROBE_POINTS = 1024

# Sugeno 求解
SOLVER_TOL = 1e-8
ALPHA_CAP = 1e6
MEASURE_TOL = 1e-9
ORACLE_GRID_N = 100000
ORACLE_CELLS = 65536

# 不等式判定
VIOLATION_TOL = 1e-6

# 函数族
FAMILY_PROBE_POINTS = 1024
REJECTION_FACTOR = 100
DEFAULT_SWEEP_DOMAIN = (0.0, 5.0)

# 画图数据
PLOT_POINTS = 201

# 表达式
MAX_EXPR_DEPTH = 64
