"""
cayley-dist - 随机 Cayley 图的区分着色与概率界验证

在桌面规模上复现随机 Cayley 图的对称性结论：自同构群是否恰为 A ⋊ ⟨i⟩、
χ + 1 色区分着色的两种构造，以及各概率界与蒙特卡洛频率的比较。

主要功能：
    - 有限阿贝尔群运算、子群与群自同构枚举
    - 按随机模型采样逆封闭连接集并构建 Cayley 图
    - 精确自同构群、精确色数、精确区分色数
    - 零和三元组构造与运动引理重着色
    - 闭式概率界与穷举普查
    - 可复现的蒙特卡洛实验与 JSON/CSV 报告

版本：1.0.0
"""

# 定义项目版本号，供其他模块导入使用
__version__ = "1.0.0"
