#!/usr/bin/env python3
"""Regenerates templates/*.json. The JSON files are the shipped artifact;
this script only exists so edits to shared sub-graphs stay consistent."""
import json
import os
import sys

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "..", "templates")

STYLES = ["realism", "dreamlight", "anime", "retroanime", "animated", "3d", "pixelart"]


def P(name):
    return "{{" + name + "}}"


class G:
    def __init__(self):
        self.nodes = {}
        self.n = 0

    def add(self, cls, **inputs):
        self.n += 1
        nid = str(self.n)
        self.nodes[nid] = {"class_type": cls, "inputs": inputs}
        return nid


def e(nid, idx=0):
    return [nid, idx]


def switch(g, select, a, b=None):
    inputs = {"select": P(select), "sel_mode": False, "input1": a}
    if b is not None:
        inputs["input2"] = b
    return g.add("ImpactSwitch", **inputs)


def style_chain(g, model, family):
    for s in STYLES:
        model = g.add("LoraLoaderModelOnly", model=e(model), lora_name=f"easel/{family}_style_{s}.safetensors",
                      strength_model=P("style_" + s))
    return model


def start_latent(g, vae, empty_latent):
    load = g.add("LoadImage", image=P("start_image"))
    scale = g.add("ImageScale", image=e(load), upscale_method="lanczos", width=P("width"), height=P("height"),
                  crop="center")
    enc = g.add("VAEEncode", pixels=e(scale), vae=e(vae))
    return switch(g, "start_select", e(enc), e(empty_latent))


def sampling(g, model, guider, latent, vae, sampler_name="euler", scheduler="simple", wrap=None):
    noise = g.add("RandomNoise", noise_seed=P("seed"))
    base = g.add("KSamplerSelect", sampler_name=sampler_name)
    if wrap:
        base = wrap(base)
    lying = g.add("LyingSigmaSampler", sampler=e(base), dishonesty_factor=P("dishonesty"), start_percent=0.1,
                  end_percent=0.9)
    sched = g.add("BasicScheduler", model=e(model), scheduler=scheduler, steps=P("steps"), denoise=P("denoise"))
    samp = g.add("SamplerCustomAdvanced", noise=e(noise), guider=e(guider), sampler=e(lying), sigmas=e(sched),
                 latent_image=e(latent))
    dec = g.add("VAEDecode", samples=e(samp), vae=e(vae))
    return dec


def nag(g, model, pos, neg, nag_neg, cfg, scale):
    return g.add("NAGCFGGuider", model=e(model), positive=e(pos), negative=e(neg), nag_negative=e(nag_neg), cfg=cfg,
                 nag_scale=scale, nag_tau=2.5, nag_alpha=0.25, nag_sigma_end=0.75)


def reference_masks(g):
    return g.add("SolidMask", value=1.0, width=P("width"), height=P("height"))


def flux_image(uso):
    g = G()
    unet = g.add("UNETLoader", unet_name="flux1-dev.safetensors", weight_dtype="default")
    clip = g.add("DualCLIPLoader", clip_name1="t5xxl_fp16.safetensors", clip_name2="clip_l.safetensors", type="flux")
    vae = g.add("VAELoader", vae_name="ae.safetensors")
    turbo = g.add("LoraLoaderModelOnly", model=e(unet), lora_name="FLUX.1-Turbo-Alpha.safetensors", strength_model=1.0)
    model = style_chain(g, turbo, "flux")
    pos = g.add("CLIPTextEncode", clip=e(clip), text=P("prompt"))
    neg = g.add("CLIPTextEncode", clip=e(clip), text=P("negative_prompt"))
    cond = g.add("FluxGuidance", conditioning=e(pos), guidance=P("guidance"))
    style_model = g.add("StyleModelLoader", style_model_name="flux1-redux-dev.safetensors")
    clip_vision = g.add("CLIPVisionLoader", clip_name="sigclip_vision_patch14_384.safetensors")
    full = reference_masks(g)
    for i in (1, 2, 3):
        img = g.add("LoadImage", image=P(f"ref{i}_image"))
        mask = g.add("LoadImageMask", image=P(f"ref{i}_mask"), channel="alpha")
        sel = switch(g, f"ref{i}_mask_select", e(mask), e(full))
        cond = g.add("ReduxAdvanced", conditioning=e(cond), style_model=e(style_model), clip_vision=e(clip_vision),
                     image=e(img), downsampling_factor=3, downsampling_function="area", mode="autocrop with mask",
                     weight=P(f"ref{i}_strength"), autocrop_margin=0.1, mask=e(sel))
    cn = g.add("ControlNetLoader", control_net_name="FLUX.1-dev-ControlNet-Union-Pro-2.0.safetensors")
    cn_typed = g.add("SetUnionControlNetType", control_net=e(cn), type=P("structure_type"))
    st_img = g.add("LoadImage", image=P("structure_image"))
    applied = g.add("ControlNetApplyAdvanced", positive=e(cond), negative=e(neg), control_net=e(cn_typed),
                    image=e(st_img), strength=P("structure_strength"), start_percent=0.0,
                    end_percent=P("structure_end"), vae=e(vae))
    pos_sel = switch(g, "structure_select", e(applied, 0), e(cond))
    neg_sel = switch(g, "structure_select", e(applied, 1), e(neg))
    if uso:
        st = g.add("LoadImage", image=P("style_image"))
        enc = g.add("CLIPVisionEncode", clip_vision=e(clip_vision), image=e(st), crop="center")
        patch = g.add("ModelPatchLoader", name="uso-flux1-projector-v1.safetensors")
        lora = g.add("LoraLoaderModelOnly", model=e(model), lora_name="uso-flux1-dit-lora-v1.safetensors",
                     strength_model=1.0)
        model = g.add("USOStyleReference", model=e(lora), model_patch=e(patch), clip_vision_output=e(enc))
    guider = nag(g, model, pos_sel, neg_sel, neg, 1.0, 9.0)
    empty = g.add("EmptySD3LatentImage", width=P("width"), height=P("height"), batch_size=1)
    latent = start_latent(g, vae, empty)
    dec = sampling(g, model, guider, latent, vae)
    g.add("SaveImage", images=e(dec), filename_prefix="easel/image")
    return g


def sdxl_image():
    g = G()
    ckpt = g.add("CheckpointLoaderSimple", ckpt_name="sd_xl_base_1.0.safetensors")
    model, clip = (ckpt, 0), (ckpt, 1)
    for s in STYLES:
        lora = g.add("LoraLoader", model=e(*model), clip=e(*clip), lora_name=f"easel/sdxl_style_{s}.safetensors",
                     strength_model=P("style_" + s), strength_clip=P("style_" + s))
        model, clip = (lora, 0), (lora, 1)
    pos = g.add("CLIPTextEncode", clip=e(*clip), text=P("prompt"))
    neg = g.add("CLIPTextEncode", clip=e(*clip), text=P("negative_prompt"))
    ipa = g.add("IPAdapterUnifiedLoader", model=e(*model), preset="PLUS (high strength)")
    full = reference_masks(g)
    m = (ipa, 0)
    for i in (1, 2, 3):
        img = g.add("LoadImage", image=P(f"ref{i}_image"))
        mask = g.add("LoadImageMask", image=P(f"ref{i}_mask"), channel="alpha")
        sel = switch(g, f"ref{i}_mask_select", e(mask), e(full))
        adv = g.add("IPAdapterAdvanced", model=e(*m), ipadapter=e(ipa, 1), image=e(img), weight=P(f"ref{i}_strength"),
                    weight_type="linear", combine_embeds="concat", start_at=0.0, end_at=1.0,
                    embeds_scaling="V only", attn_mask=e(sel))
        m = (adv, 0)
    cn = g.add("ControlNetLoader", control_net_name="controlnet-union-sdxl-promax.safetensors")
    cn_typed = g.add("SetUnionControlNetType", control_net=e(cn), type=P("structure_type"))
    st_img = g.add("LoadImage", image=P("structure_image"))
    ckpt_vae = (ckpt, 2)
    applied = g.add("ControlNetApplyAdvanced", positive=e(pos), negative=e(neg), control_net=e(cn_typed),
                    image=e(st_img), strength=P("structure_strength"), start_percent=0.0,
                    end_percent=P("structure_end"), vae=e(*ckpt_vae))
    pos_sel = switch(g, "structure_select", e(applied, 0), e(pos))
    neg_sel = switch(g, "structure_select", e(applied, 1), e(neg))
    guider = g.add("CFGGuider", model=e(*m), positive=e(pos_sel), negative=e(neg_sel), cfg=P("guidance"))
    empty = g.add("EmptyLatentImage", width=P("width"), height=P("height"), batch_size=1)
    load = g.add("LoadImage", image=P("start_image"))
    scale = g.add("ImageScale", image=e(load), upscale_method="lanczos", width=P("width"), height=P("height"),
                  crop="center")
    enc = g.add("VAEEncode", pixels=e(scale), vae=e(*ckpt_vae))
    latent = switch(g, "start_select", e(enc), e(empty))
    noise = g.add("RandomNoise", noise_seed=P("seed"))
    base = g.add("KSamplerSelect", sampler_name="dpmpp_2m")
    lying = g.add("LyingSigmaSampler", sampler=e(base), dishonesty_factor=P("dishonesty"), start_percent=0.1,
                  end_percent=0.9)
    sched = g.add("BasicScheduler", model=e(*m), scheduler="karras", steps=P("steps"), denoise=P("denoise"))
    samp = g.add("SamplerCustomAdvanced", noise=e(noise), guider=e(guider), sampler=e(lying), sigmas=e(sched),
                 latent_image=e(latent))
    dec = g.add("VAEDecode", samples=e(samp), vae=e(*ckpt_vae))
    g.add("SaveImage", images=e(dec), filename_prefix="easel/image")
    return g


def wan_base(g, unet_name, lora_name):
    unet = g.add("UNETLoader", unet_name=unet_name, weight_dtype="default")
    lora = g.add("LoraLoaderModelOnly", model=e(unet), lora_name=lora_name, strength_model=1.0)
    model = style_chain(g, lora, "wan22")
    return g.add("ModelSamplingSD3", model=e(model), shift=8.0)


def wan22_image():
    g = G()
    model = wan_base(g, "wan2.2_t2v_low_noise_14B_fp8_scaled.safetensors",
                     "wan2.2_t2v_lightx2v_4steps_lora_v1.1_low_noise.safetensors")
    clip = g.add("CLIPLoader", clip_name="umt5_xxl_fp8_e4m3fn_scaled.safetensors", type="wan")
    vae = g.add("VAELoader", vae_name="wan_2.1_vae.safetensors")
    pos = g.add("CLIPTextEncode", clip=e(clip), text=P("prompt"))
    neg = g.add("CLIPTextEncode", clip=e(clip), text=P("negative_prompt"))
    guider = nag(g, model, pos, neg, neg, P("guidance"), 11.0)
    empty = g.add("EmptyHunyuanLatentVideo", width=P("width"), height=P("height"), length=1, batch_size=1)
    latent = start_latent(g, vae, empty)
    dec = sampling(g, model, guider, latent, vae)
    g.add("SaveImage", images=e(dec), filename_prefix="easel/image")
    return g


def flowedit_tail(g, model, source, target, vae, **guider_extra):
    load = g.add("LoadImage", image=P("input_image"))
    scale = g.add("ImageScale", image=e(load), upscale_method="lanczos", width=P("width"), height=P("height"),
                  crop="center")
    enc = g.add("VAEEncode", pixels=e(scale), vae=e(vae))
    guider = g.add("FlowEditGuider", model=e(model), source_cond=e(source), target_cond=e(target), **guider_extra)
    noise = g.add("RandomNoise", noise_seed=P("seed"))
    base = g.add("KSamplerSelect", sampler_name="euler")
    fe = g.add("FlowEditSampler", sampler=e(base), skip_steps=P("skip_steps"), drift_steps=P("drift_steps"))
    lying = g.add("LyingSigmaSampler", sampler=e(fe), dishonesty_factor=P("dishonesty"), start_percent=0.1,
                  end_percent=0.9)
    sched = g.add("BasicScheduler", model=e(model), scheduler="simple", steps=P("steps"), denoise=P("denoise"))
    samp = g.add("SamplerCustomAdvanced", noise=e(noise), guider=e(guider), sampler=e(lying), sigmas=e(sched),
                 latent_image=e(enc))
    dec = g.add("VAEDecode", samples=e(samp), vae=e(vae))
    g.add("SaveImage", images=e(dec), filename_prefix="easel/trace")


def flux_trace(uso):
    g = G()
    unet = g.add("UNETLoader", unet_name="flux1-dev.safetensors", weight_dtype="default")
    clip = g.add("DualCLIPLoader", clip_name1="t5xxl_fp16.safetensors", clip_name2="clip_l.safetensors", type="flux")
    vae = g.add("VAELoader", vae_name="ae.safetensors")
    model = style_chain(g, unet, "flux")
    src = g.add("CLIPTextEncode", clip=e(clip), text=P("source_prompt"))
    src_g = g.add("FluxGuidance", conditioning=e(src), guidance=P("guidance"))
    tgt = g.add("CLIPTextEncode", clip=e(clip), text=P("target_prompt"))
    tgt_g = g.add("FluxGuidance", conditioning=e(tgt), guidance=P("guidance"))
    cn = g.add("ControlNetLoader", control_net_name="FLUX.1-dev-ControlNet-Union-Pro-2.0.safetensors")
    cn_typed = g.add("SetUnionControlNetType", control_net=e(cn), type=P("structure_type"))
    st_img = g.add("LoadImage", image=P("structure_image"))
    applied = g.add("ControlNetApplyAdvanced", positive=e(tgt_g), negative=e(src_g), control_net=e(cn_typed),
                    image=e(st_img), strength=P("structure_strength"), start_percent=0.0,
                    end_percent=P("structure_end"), vae=e(vae))
    tgt_sel = switch(g, "structure_select", e(applied, 0), e(tgt_g))
    if uso:
        clip_vision = g.add("CLIPVisionLoader", clip_name="sigclip_vision_patch14_384.safetensors")
        st = g.add("LoadImage", image=P("style_image"))
        enc = g.add("CLIPVisionEncode", clip_vision=e(clip_vision), image=e(st), crop="center")
        patch = g.add("ModelPatchLoader", name="uso-flux1-projector-v1.safetensors")
        lora = g.add("LoraLoaderModelOnly", model=e(model), lora_name="uso-flux1-dit-lora-v1.safetensors",
                     strength_model=1.0)
        model = g.add("USOStyleReference", model=e(lora), model_patch=e(patch), clip_vision_output=e(enc))
    flowedit_tail(g, model, src_g, tgt_sel, vae)
    return g


def wan22_trace():
    g = G()
    model = wan_base(g, "wan2.2_t2v_low_noise_14B_fp8_scaled.safetensors",
                     "wan2.2_t2v_lightx2v_4steps_lora_v1.1_low_noise.safetensors")
    clip = g.add("CLIPLoader", clip_name="umt5_xxl_fp8_e4m3fn_scaled.safetensors", type="wan")
    vae = g.add("VAELoader", vae_name="wan_2.1_vae.safetensors")
    src = g.add("CLIPTextEncode", clip=e(clip), text=P("source_prompt"))
    tgt = g.add("CLIPTextEncode", clip=e(clip), text=P("target_prompt"))
    cn = g.add("ControlNetLoader", control_net_name="wan2.2_fun_control_union.safetensors")
    cn_typed = g.add("SetUnionControlNetType", control_net=e(cn), type=P("structure_type"))
    st_img = g.add("LoadImage", image=P("structure_image"))
    applied = g.add("ControlNetApplyAdvanced", positive=e(tgt), negative=e(src), control_net=e(cn_typed),
                    image=e(st_img), strength=P("structure_strength"), start_percent=0.0,
                    end_percent=P("structure_end"), vae=e(vae))
    tgt_sel = switch(g, "structure_select", e(applied, 0), e(tgt))
    flowedit_tail(g, model, src, tgt_sel, vae, cfg=P("guidance"))
    return g


def flux_kontext_modify():
    g = G()
    unet = g.add("UNETLoader", unet_name="flux1-kontext-dev.safetensors", weight_dtype="default")
    clip = g.add("DualCLIPLoader", clip_name1="t5xxl_fp16.safetensors", clip_name2="clip_l.safetensors", type="flux")
    vae = g.add("VAELoader", vae_name="ae.safetensors")
    model = unet
    for group in ("relight", "camera", "style"):
        model = g.add("LoraLoaderModelOnly", model=e(model), lora_name=f"easel/kontext_{group}.safetensors",
                      strength_model=P("lora_" + group))
    model = style_chain(g, model, "flux")
    pos = g.add("CLIPTextEncode", clip=e(clip), text=P("prompt"))
    neg = g.add("CLIPTextEncode", clip=e(clip), text=P("negative_prompt"))
    load = g.add("LoadImage", image=P("input_image"))
    scaled = g.add("FluxKontextImageScale", image=e(load))
    enc = g.add("VAEEncode", pixels=e(scaled), vae=e(vae))
    ref = g.add("ReferenceLatent", conditioning=e(pos), latent=e(enc))
    cond = g.add("FluxGuidance", conditioning=e(ref), guidance=P("guidance"))
    empty = g.add("EmptySD3LatentImage", width=P("width"), height=P("height"), batch_size=1)
    latent = switch(g, "aspect_select", e(empty), e(enc))
    guider = nag(g, model, cond, neg, neg, 1.0, 9.0)
    dec = sampling(g, model, guider, latent, vae)
    g.add("SaveImage", images=e(dec), filename_prefix="easel/modify")
    return g


def wan22_animate():
    g = G()
    high = wan_base(g, "wan2.2_i2v_high_noise_14B_fp8_scaled.safetensors",
                    "wan2.2_i2v_lightx2v_4steps_lora_v1_high_noise.safetensors")
    low = wan_base(g, "wan2.2_i2v_low_noise_14B_fp8_scaled.safetensors",
                   "wan2.2_i2v_lightx2v_4steps_lora_v1_low_noise.safetensors")
    clip = g.add("CLIPLoader", clip_name="umt5_xxl_fp8_e4m3fn_scaled.safetensors", type="wan")
    vae = g.add("VAELoader", vae_name="wan_2.1_vae.safetensors")
    pos = g.add("CLIPTextEncode", clip=e(clip), text=P("prompt"))
    neg = g.add("CLIPTextEncode", clip=e(clip), text=P("negative_prompt"))
    first = g.add("LoadImage", image=P("first_frame_image"))
    first_sel = switch(g, "first_select", e(first))
    last = g.add("LoadImage", image=P("last_frame_image"))
    last_sel = switch(g, "last_select", e(last))
    flf = g.add("WanFirstLastFrameToVideo", positive=e(pos), negative=e(neg), vae=e(vae), width=P("width"),
                height=P("height"), length=81, batch_size=1, start_image=e(first_sel), end_image=e(last_sel))
    g_high = nag(g, high, (flf), (flf), neg, P("guidance"), 11.0)
    g.nodes[g_high]["inputs"]["positive"] = e(flf, 0)
    g.nodes[g_high]["inputs"]["negative"] = e(flf, 1)
    g_low = nag(g, low, (flf), (flf), neg, P("guidance"), 11.0)
    g.nodes[g_low]["inputs"]["positive"] = e(flf, 0)
    g.nodes[g_low]["inputs"]["negative"] = e(flf, 1)
    sched = g.add("BasicScheduler", model=e(high), scheduler="simple", steps=P("steps"), denoise=1.0)
    split = g.add("SplitSigmas", sigmas=e(sched), step=P("split_step"))
    noise = g.add("RandomNoise", noise_seed=P("seed"))
    no_noise = g.add("DisableNoise")
    base = g.add("KSamplerSelect", sampler_name="euler")
    lying = g.add("LyingSigmaSampler", sampler=e(base), dishonesty_factor=P("dishonesty"), start_percent=0.1,
                  end_percent=0.9)
    s1 = g.add("SamplerCustomAdvanced", noise=e(noise), guider=e(g_high), sampler=e(lying), sigmas=e(split, 0),
               latent_image=e(flf, 2))
    s2 = g.add("SamplerCustomAdvanced", noise=e(no_noise), guider=e(g_low), sampler=e(lying), sigmas=e(split, 1),
               latent_image=e(s1))
    dec = g.add("VAEDecode", samples=e(s2), vae=e(vae))
    video = g.add("CreateVideo", images=e(dec), fps=16.0)
    g.add("SaveVideo", video=e(video), filename_prefix="easel/animate", format="mp4", codec="h264")
    return g


def load_scaled(g):
    load = g.add("LoadImage", image=P("input_image"))
    return g.add("ImageScale", image=e(load), upscale_method="lanczos", width=P("width"), height=P("height"),
                 crop="disabled")


def remove_background():
    g = G()
    img = load_scaled(g)
    rm = g.add("InspyrenetRembg", image=e(img), torchscript_jit="default")
    g.add("SaveImage", images=e(rm), filename_prefix="easel/remove_background")
    return g


def extract_element():
    g = G()
    img = load_scaled(g)
    sam = g.add("SAMModelLoader (segment anything)", model_name="sam_vit_h (2.56GB)")
    dino = g.add("GroundingDinoModelLoader (segment anything)", model_name="GroundingDINO_SwinT_OGC (694MB)")
    seg = g.add("GroundingDinoSAMSegment (segment anything)", sam_model=e(sam), grounding_dino_model=e(dino),
                image=e(img), prompt=P("prompt"), threshold=0.3)
    g.add("SaveImage", images=e(seg), filename_prefix="easel/extract_element")
    return g


def preprocessors(g, img):
    pose = g.add("DWPreprocessor", image=e(img), detect_hand="enable", detect_body="enable", detect_face="enable",
                 resolution=1024, bbox_detector="yolox_l.onnx", pose_estimator="dw-ll_ucoco_384_bs5.torchscript.pt")
    depth = g.add("DepthAnythingV2Preprocessor", image=e(img), ckpt_name="depth_anything_v2_vitl.pth", resolution=1024)
    scribble = g.add("ScribblePreprocessor", image=e(img), resolution=1024)
    lineart = g.add("LineArtPreprocessor", image=e(img), coarse="disable", resolution=1024)
    for name, node in (("pose", pose), ("depth", depth), ("scribble", scribble), ("lineart", lineart)):
        rescaled = g.add("ImageScale", image=e(node), upscale_method="bilinear", width=P("width"),
                         height=P("height"), crop="disabled")
        g.add("SaveImage", images=e(rescaled), filename_prefix=f"easel/control_{name}")


def stencil():
    g = G()
    img = load_scaled(g)
    preprocessors(g, img)
    return g


def preprocess():
    g = G()
    img = load_scaled(g)
    florence = g.add("DownloadAndLoadFlorence2Model", model="microsoft/Florence-2-large", precision="fp16",
                     attention="sdpa")
    run = g.add("Florence2Run", image=e(img), florence2_model=e(florence), text_input="", task="more_detailed_caption",
                fill_mask=True, keep_model_loaded=False, max_new_tokens=1024, num_beams=3, do_sample=False,
                output_mask_select="", seed=1)
    g.add("ShowText|pysssss", text=e(run, 2))
    preprocessors(g, img)
    return g


def upscale():
    g = G()
    load = g.add("LoadImage", image=P("input_image"))
    model = g.add("UpscaleModelLoader", model_name="4x-UltraSharp.pth")
    up = g.add("ImageUpscaleWithModel", upscale_model=e(model), image=e(load))
    scaled = g.add("ImageScale", image=e(up), upscale_method="lanczos", width=P("width"), height=P("height"),
                   crop="disabled")
    g.add("SaveImage", images=e(scaled), filename_prefix="easel/upscale")
    return g


def extend():
    g = G()
    load = g.add("LoadImage", image=P("input_image"))
    pad = g.add("ImagePadForOutpaint", image=e(load), left=P("pad_x"), top=0, right=P("pad_x"), bottom=0,
                feathering=24)
    unet = g.add("UNETLoader", unet_name="flux1-fill-dev.safetensors", weight_dtype="default")
    clip = g.add("DualCLIPLoader", clip_name1="t5xxl_fp16.safetensors", clip_name2="clip_l.safetensors", type="flux")
    vae = g.add("VAELoader", vae_name="ae.safetensors")
    pos = g.add("CLIPTextEncode", clip=e(clip), text=P("prompt"))
    neg = g.add("CLIPTextEncode", clip=e(clip), text="")
    guided = g.add("FluxGuidance", conditioning=e(pos), guidance=30.0)
    inpaint = g.add("InpaintModelConditioning", positive=e(guided), negative=e(neg), vae=e(vae), pixels=e(pad, 0),
                    mask=e(pad, 1), noise_mask=True)
    ks = g.add("KSampler", model=e(unet), seed=P("seed"), steps=20, cfg=1.0, sampler_name="euler",
               scheduler="normal", positive=e(inpaint, 0), negative=e(inpaint, 1), latent_image=e(inpaint, 2),
               denoise=1.0)
    dec = g.add("VAEDecode", samples=e(ks), vae=e(vae))
    scaled = g.add("ImageScale", image=e(dec), upscale_method="lanczos", width=P("width"), height=P("height"),
                   crop="disabled")
    g.add("SaveImage", images=e(scaled), filename_prefix="easel/extend")
    return g


def sculpt():
    g = G()
    img = load_scaled(g)
    loader = g.add("Hy3DModelLoader", model="hunyuan3d-dit-v2-0-fp16.safetensors", attention_mode="sdpa",
                   cublas_ops=False)
    gen = g.add("Hy3DGenerateMesh", pipeline=e(loader), image=e(img), guidance_scale=5.5, steps=30, seed=P("seed"))
    dec = g.add("Hy3DVAEDecode", vae=e(loader, 1), latents=e(gen), box_v=1.01, octree_resolution=384,
                num_chunks=8000, mc_level=0.0, mc_algo="mc")
    post = g.add("Hy3DPostprocessMesh", trimesh=e(dec), remove_floaters=True, remove_degenerate_faces=True,
                 reduce_faces=True, max_facenum=50000, smooth_normals=False)
    g.add("Hy3DExportMesh", trimesh=e(post), filename_prefix="easel/sculpt", file_format="glb")
    return g


TEMPLATES = {
    "flux_image": lambda: flux_image(False),
    "flux_image_uso": lambda: flux_image(True),
    "sdxl_image": sdxl_image,
    "wan22_image": wan22_image,
    "flux_trace": lambda: flux_trace(False),
    "flux_trace_uso": lambda: flux_trace(True),
    "wan22_trace": wan22_trace,
    "flux_kontext_modify": flux_kontext_modify,
    "wan22_animate": wan22_animate,
    "remove_background": remove_background,
    "extract_element": extract_element,
    "stencil": stencil,
    "preprocess": preprocess,
    "upscale": upscale,
    "extend": extend,
    "sculpt": sculpt,
}

VERSION = "1.0.0"

os.makedirs(OUT, exist_ok=True)
manifest = {"version": VERSION, "templates": {}}
for name, build in TEMPLATES.items():
    g = build()
    doc = {"name": name, "version": VERSION, "nodes": g.nodes}
    with open(os.path.join(OUT, name + ".json"), "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
    manifest["templates"][name] = name + ".json"
with open(os.path.join(OUT, "manifest.json"), "w") as f:
    json.dump(manifest, f, indent=2, sort_keys=True)
    f.write("\n")
print("wrote", len(TEMPLATES), "templates to", OUT)
