"""Overlap-safe bulk element moves for compiled code."""
from numba import types
from numba.core import cgutils
from numba.extending import intrinsic


@intrinsic
def memmove(typingctx, arr, dst, src, count):
    """``arr[dst:dst+count] = arr[src:src+count]`` for overlapping ranges, no temp copy."""
    sig = types.void(arr, types.intp, types.intp, types.intp)

    def codegen(context, builder, signature, args):
        aty = signature.args[0]
        ary = context.make_array(aty)(context, builder, args[0])
        d = cgutils.gep(builder, ary.data, args[1])
        s = cgutils.gep(builder, ary.data, args[2])
        itemsize = context.get_abi_sizeof(context.get_data_type(aty.dtype))
        cgutils.raw_memmove(builder, d, s, args[3], itemsize)

    return sig, codegen


@intrinsic
def memcopy(typingctx, dst, dpos, src, spos, count):
    """``dst[dpos:dpos+count] = src[spos:spos+count]`` for two distinct arrays of one dtype."""
    sig = types.void(dst, types.intp, src, types.intp, types.intp)

    def codegen(context, builder, signature, args):
        dty, sty = signature.args[0], signature.args[2]
        dary = context.make_array(dty)(context, builder, args[0])
        sary = context.make_array(sty)(context, builder, args[2])
        d = cgutils.gep(builder, dary.data, args[1])
        s = cgutils.gep(builder, sary.data, args[3])
        itemsize = context.get_abi_sizeof(context.get_data_type(dty.dtype))
        cgutils.raw_memcpy(builder, d, s, args[4], itemsize)

    return sig, codegen
